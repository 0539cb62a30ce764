#pragma once

#include <vector>

#include "lamlab/groundcycle.hpp"
#include "lamlab/potential.hpp"

namespace lamlab {

// Nearest-neighbour coupling along the vertical axis: zero for equal spins, lambda
// otherwise. This specific form is fixed; arbitrary vertical interactions are rejected.
struct VerticalPotential {
    double lambda = 0.0;

    double bond(spin_t a, spin_t b) const { return a == b ? 0.0 : lambda; }
};

// Two-dimensional model built from 1-D horizontal layers (every layer carries the same
// finite-range Hamiltonian, base plus coupled perturbations) tied together by the vertical
// potential. Sites are (i, t): axis 0 horizontal within a layer, axis 1 vertical.
struct LaminatedModel {
    HamiltonianFamily horizontal;
    Hamiltonian combined;            // base + sum mu_k * perturbation_k, flattened
    VerticalPotential vertical;
    int l = 1;                       // column height used by the contour machinery
    int rbar = 1;                    // influence radius; exceeds range, period and block size
    double beta = 1.0;
    GroundReport ground;             // ground structure of the unperturbed horizontal model

    int spin_count() const { return combined.spin_count(); }
    int ground_count() const { return static_cast<int>(ground.ground_words.size()); }
    int ground_period() const { return ground.model.block_size; }
    const std::vector<spin_t>& ground_pattern(int q) const { return ground.ground_patterns[q]; }
};

// Validates the family, flattens it, discovers the ground states of the base model and
// checks rbar against every length scale it has to dominate.
LaminatedModel build_laminated(const HamiltonianFamily& fam, double lambda, int l, int rbar,
                               double beta, double rel_tol = 1e-9);

// Configuration identical to ground state q everywhere (exterior included) on the window.
Configuration lift_ground(const LaminatedModel& m, int q, const Window& w);

// H(a) - H(b) for same-frame configurations: per-layer horizontal terms plus vertical
// bonds, each bond counted once. Finite and padding-invariant for fixed boundaries.
double relative_energy_laminated(const Configuration& a, const Configuration& b,
                                 const LaminatedModel& m);
// The two addends reported separately (their sum is relative_energy_laminated).
double relative_horizontal(const Configuration& a, const Configuration& b,
                           const LaminatedModel& m);
double relative_vertical(const Configuration& a, const Configuration& b,
                         const LaminatedModel& m);

// Total energy of the window against its own boundary data: horizontal terms anchored in
// the window plus vertical bonds with at least one endpoint in it (each once).
double window_energy_laminated(const Configuration& c, const LaminatedModel& m);

// Perturbation part of the specific energy of ground state q: sum_k mu_k e_k^q, per site.
double ground_field(const LaminatedModel& m, int q);

struct ParameterReport {
    double beta = 0.0;
    double rho = 0.0;      // horizontal excitation margin used
    double tau = 0.0;      // decay target; 0 when (u, v) were given directly
    double u = 0.0;
    double v = 0.0;
    int l_min = 0;
    double lambda0 = 0.0;
    double shrink = 0.0;   // amount subtracted from the unperturbed excitation constant
    bool from_tau = false;
};

// u from the decay target tau by explicit counting: tau + log(spin count) per column value
// plus (d+1) log 3 for the connectivity of supports, d = 1 horizontal dimension here;
// v = max(1, log spin count). Then l_min = ceil(u / (beta rho)), lambda0 = (u + v l_min)/beta,
// which makes beta*rho*l_min >= u and beta*lambda0 = u + v*l_min hold by construction.
ParameterReport choose_parameters(double beta, double rho, double tau, int spin_count);
// Direct variant when the functional constants are prescribed.
ParameterReport choose_parameters_uv(double beta, double rho, double u, double v);

// Default excitation margin for a family: the base model's constant per block site divided
// by the influence radius (one wall defects up to 2*rbar columns per layer while carrying
// roughly two boundary sites' worth of energy), shrunk by the largest per-site energy
// displacement the coupled perturbations can cause.
ParameterReport default_margin(const LaminatedModel& m, double tau);

}  // namespace lamlab
