#pragma once

#include <string>
#include <vector>

#include "lamlab/lattice.hpp"

namespace lamlab {

// One finite-range interaction term: a pattern of offsets along axis 0 (0 = anchor, all
// offsets nonnegative, so a pattern only reaches rightward from its anchor) and an energy
// table over all spin assignments of the pattern, leftmost site most significant.
struct PatternPotential {
    std::vector<int> pattern;
    int residue = 0;  // applies at anchors x with mod(x, period) == residue
    std::vector<double> table;
    std::vector<long long> table_num;  // numerators, filled when the model is exact

    int range() const { return pattern.empty() ? 0 : pattern.back(); }
};

// Translation-periodic finite-range Hamiltonian on Z (site-dependent up to `period`).
// `denom > 0` switches on the exact mode: every table entry must be an integer multiple of
// 1/denom and integer numerators are carried alongside the doubles.
struct Hamiltonian {
    std::vector<std::string> spins;
    int dimension = 1;
    int period = 1;
    long long denom = 0;
    std::vector<PatternPotential> terms;

    int spin_count() const { return static_cast<int>(spins.size()); }
    int range() const;
    void finalize();  // validate fields and compute exact numerators
};

// H_g = base + sum_k mu_k * perturbation_k.
struct HamiltonianFamily {
    Hamiltonian base;
    std::vector<Hamiltonian> perturbations;
    std::vector<double> mu;

    void validate() const;
};

// Energy of all terms anchored at `anchor` (pattern offsets run along axis 0, other
// coordinates fixed), spins resolved through the configuration's boundary rule.
double anchor_energy(const Configuration& c, const Hamiltonian& h, const Site& anchor);
long long anchor_energy_num(const Configuration& c, const Hamiltonian& h, const Site& anchor);

// Sum of anchor_energy over every site of the window.
double window_energy(const Configuration& c, const Hamiltonian& h);
long long window_energy_num(const Configuration& c, const Hamiltonian& h);

// H(a) - H(b) for two configurations sharing window, boundary mode and exterior; evaluated
// over the finite set of anchors whose terms can differ, so the value is independent of any
// padding of the shared window. Dimension-2 configurations are handled the same way
// (anchors enumerated per layer), which is what the laminated wrapper uses.
double relative_energy(const Configuration& a, const Configuration& b, const Hamiltonian& h);
long long relative_energy_num(const Configuration& a, const Configuration& b,
                              const Hamiltonian& h);

// Exact energy per site of the periodic configuration repeating `block`; block length must
// be a multiple of the Hamiltonian period.
double specific_energy(const std::vector<spin_t>& block, const Hamiltonian& h);
long long specific_energy_num_per_period(const std::vector<spin_t>& block, const Hamiltonian& h);

struct NondegeneracyReport {
    std::vector<std::vector<double>> matrix;  // r rows: e_k^q for k = 1..r-1, then all ones
    double det = 0.0;
    double scale = 1.0;      // Hadamard bound, used to normalize the threshold
    double condition = 0.0;  // scale / |det|
    bool nondegenerate = false;
};

// Builds the specific-energy matrix of the family's perturbations on the given ground-state
// period blocks and tests it for (numerical) nonsingularity.
NondegeneracyReport nondegeneracy_check(const HamiltonianFamily& fam,
                                        const std::vector<std::vector<spin_t>>& ground_blocks);

// Flatten a family at its current mu into one Hamiltonian (tables merged term-by-term).
// The result is float-mode unless there are no perturbations.
Hamiltonian combine(const HamiltonianFamily& fam);

// sum over terms of |pattern| * max|table|: bounds how much energy the Hamiltonian can
// attach to any single site; used to shrink the Peierls constant under perturbations.
double site_influence_bound(const Hamiltonian& h);

}  // namespace lamlab
