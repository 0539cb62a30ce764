#pragma once

#include <vector>

#include "lamlab/potential.hpp"

namespace lamlab {

// Nearest-neighbour reduction of a finite-range 1-D Hamiltonian: sites are grouped into
// blocks of `block_size` >= interaction range, each block value is a base-|S| word (leftmost
// site most significant), and the energy splits into a per-block part phi1 and a bond part
// phi2 between adjacent blocks. phibar2(x, y) = phi1(x) + phi2(x, y) attaches each block's
// internal energy to its outgoing bond, so cycles in the complete digraph on block values
// carry exactly the energy per period of the corresponding periodic configuration.
struct BlockModel {
    Hamiltonian source;
    int block_size = 1;
    long long blocks = 0;  // |S|^block_size
    std::vector<double> phi1;            // [blocks]
    std::vector<double> phi2;            // [blocks * blocks], row-major (x * blocks + y)
    std::vector<long long> phi1_num;     // exact numerators over source.denom, if exact
    std::vector<long long> phi2_num;

    int spin_count() const { return source.spin_count(); }
    bool exact() const { return source.denom > 0; }

    double phibar2(long long x, long long y) const { return phi1[x] + phi2[x * blocks + y]; }
    long long phibar2_num(long long x, long long y) const {
        return phi1_num[x] + phi2_num[x * blocks + y];
    }

    std::vector<spin_t> block_pattern(long long index) const;
    long long block_index(const std::vector<spin_t>& sites, size_t offset = 0) const;
};

// Requires block_size >= max(range, 1) and block_size divisible by the Hamiltonian period;
// refuses block spaces larger than 4096 values.
BlockModel coarse_grain(const Hamiltonian& h, int block_size);

// Concatenated site pattern of a block word sequence.
std::vector<spin_t> expand_blocks(const BlockModel& m, const std::vector<long long>& words);

// Energy attached to a finite run of blocks `words` embedded in an infinite background of
// `boundary` blocks: phibar2 over the pairs (boundary, w0), (w0, w1), ..., (w_last, boundary).
// Equals the window energy of the corresponding site configuration when one boundary block
// is prepended to the window (the leading pair carries phi1(boundary)).
double chain_energy(const BlockModel& m, long long boundary, const std::vector<long long>& words);
long long chain_energy_num(const BlockModel& m, long long boundary,
                           const std::vector<long long>& words);

}  // namespace lamlab
