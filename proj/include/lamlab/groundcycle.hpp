#pragma once

#include <vector>

#include "lamlab/blockspin.hpp"
#include "lamlab/util.hpp"

namespace lamlab {

// Elementary cycle on the block-value digraph, stored in canonical form: the vertex list
// starts at the smallest vertex and is not closed (the edge back to the front is implied).
struct Cycle {
    std::vector<int> vertices;
    double mean = 0.0;           // total weight / length
    fraction mean_exact{0, 1};   // meaningful in exact mode only
};

struct CycleSolution {
    double min_mean = 0.0;
    fraction min_mean_exact{0, 1};
    bool exact = false;
    std::vector<Cycle> cycles;  // every elementary cycle attaining the minimum mean
};

// Minimum mean cycle on the complete dense digraph with weight matrix w[x*n+y] (self-loops
// included), via the Karp recurrence; all optimal elementary cycles are recovered from the
// tight subgraph of reduced weights. `rel_tol` scales with max|w| and controls which cycles
// count as tied with the optimum. Vertex count is capped at 1024.
CycleSolution minimum_mean_cycles(int n, const std::vector<double>& w, double rel_tol = 1e-9);

// Same with integer weights interpreted over a common denominator; ties are exact. Weight
// magnitudes are capped so all internal arithmetic stays exact.
CycleSolution minimum_mean_cycles_exact(int n, const std::vector<long long>& w, long long denom);

// Every elementary cycle of the complete digraph on n vertices (canonical form), for
// exhaustive oracles; n is capped at 12.
std::vector<std::vector<int>> all_elementary_cycles(int n);

// Excitation rate of the block model relative to its ground words Q: half the minimum
// shifted mean over elementary cycles that are not ground self-loops. The factor accounts
// for each non-ground bond marking at most two boundary block sites, which is exactly what
// the brute-force boundary audit counts. Returns +infinity when no such cycle exists.
double peierls_constant(const BlockModel& m, const std::vector<long long>& ground_words,
                        double mu_star, double rel_tol = 1e-9);
fraction peierls_constant_exact(const BlockModel& m, const std::vector<long long>& ground_words,
                                const fraction& mu_star);

// A block site of a word sequence is boundary unless it and both neighbours carry one and
// the same ground word. The exterior continues with `exterior` on both sides, and the two
// fringe sites just outside the window are included in the count.
long long boundary_site_count(const std::vector<long long>& words,
                              const std::vector<long long>& ground_words, long long exterior);

struct GroundRound {
    int block_size = 0;
    double min_mean = 0.0;  // per block bond
    std::vector<Cycle> cycles;
};

struct GroundReport {
    BlockModel model;  // final, re-blocked so every ground state is a constant block word
    std::vector<GroundRound> rounds;
    std::vector<long long> ground_words;              // Q, sorted
    std::vector<std::vector<spin_t>> ground_patterns;  // site patterns of Q
    bool exact = false;
    double min_mean = 0.0;       // final model, per block bond
    double shift = 0.0;          // per site; subtracting it makes ground specific energy 0
    fraction shift_exact{0, 1};
    double peierls_c = 0.0;      // per block site of the final model; +inf if no excitations
    fraction peierls_exact{0, 1};
    bool peierls_finite = true;
};

// Full pipeline: coarse-grain (block size auto-extends to a period multiple covering the
// range when 0), find minimal-mean cycles, re-block by the lcm of their lengths until all
// ground states are constant words (at most three re-blocking rounds), then compute the
// energy shift and the excitation constant.
GroundReport ground_states(const Hamiltonian& h, int block_size = 0, double rel_tol = 1e-9);

}  // namespace lamlab
