#include "lamlab/blockspin.hpp"

#include <stdexcept>

#include "lamlab/util.hpp"

namespace lamlab {

std::vector<spin_t> BlockModel::block_pattern(long long index) const {
    if (index < 0 || index >= blocks) throw std::invalid_argument("block index out of range");
    std::vector<spin_t> p(block_size);
    const int s = spin_count();
    for (int i = block_size - 1; i >= 0; --i) {
        p[i] = static_cast<spin_t>(index % s);
        index /= s;
    }
    return p;
}

long long BlockModel::block_index(const std::vector<spin_t>& sites, size_t offset) const {
    if (offset + block_size > sites.size()) throw std::invalid_argument("pattern too short");
    long long idx = 0;
    for (int i = 0; i < block_size; ++i) {
        if (sites[offset + i] >= spin_count()) throw std::invalid_argument("spin out of range");
        idx = idx * spin_count() + sites[offset + i];
    }
    return idx;
}

BlockModel coarse_grain(const Hamiltonian& h, int block_size) {
    Hamiltonian src = h;
    src.finalize();
    if (block_size < 1 || block_size < src.range())
        throw std::invalid_argument("block size must cover the interaction range");
    if (block_size % src.period != 0)
        throw std::invalid_argument("block size must be a multiple of the period");

    BlockModel m;
    m.source = src;
    m.block_size = block_size;
    long long M = 1;
    for (int i = 0; i < block_size; ++i) {
        M *= src.spin_count();
        if (M > 4096) throw capacity_error("block space exceeds 4096 values");
    }
    m.blocks = M;
    m.phi1.assign(M, 0.0);
    m.phi2.assign(M * M, 0.0);
    if (m.exact()) {
        m.phi1_num.assign(M, 0);
        m.phi2_num.assign(M * M, 0);
    }

    // phi1: terms anchored inside a block and fully contained in it.
    std::vector<spin_t> pat;
    for (long long x = 0; x < M; ++x) {
        pat = m.block_pattern(x);
        kahan_sum s;
        long long sn = 0;
        for (int i = 0; i < block_size; ++i) {
            for (const auto& t : src.terms) {
                if (mod(i, src.period) != t.residue) continue;
                if (i + t.range() >= block_size) continue;
                size_t idx = 0;
                for (int off : t.pattern) idx = idx * src.spin_count() + pat[i + off];
                s.add(t.table[idx]);
                if (m.exact()) sn += t.table_num[idx];
            }
        }
        m.phi1[x] = s.value();
        if (m.exact()) m.phi1_num[x] = sn;
    }

    // phi2: terms anchored in the left block that straddle into the right one. With
    // block_size >= range a term spans at most two adjacent blocks, so this is exhaustive.
    std::vector<spin_t> two(2 * block_size);
    for (long long x = 0; x < M; ++x) {
        const auto px = m.block_pattern(x);
        std::copy(px.begin(), px.end(), two.begin());
        for (long long y = 0; y < M; ++y) {
            const auto py = m.block_pattern(y);
            std::copy(py.begin(), py.end(), two.begin() + block_size);
            kahan_sum s;
            long long sn = 0;
            for (int i = 0; i < block_size; ++i) {
                for (const auto& t : src.terms) {
                    if (mod(i, src.period) != t.residue) continue;
                    if (i + t.range() < block_size) continue;
                    size_t idx = 0;
                    for (int off : t.pattern) idx = idx * src.spin_count() + two[i + off];
                    s.add(t.table[idx]);
                    if (m.exact()) sn += t.table_num[idx];
                }
            }
            m.phi2[x * M + y] = s.value();
            if (m.exact()) m.phi2_num[x * M + y] = sn;
        }
    }
    return m;
}

std::vector<spin_t> expand_blocks(const BlockModel& m, const std::vector<long long>& words) {
    std::vector<spin_t> out;
    out.reserve(words.size() * m.block_size);
    for (long long w : words) {
        const auto p = m.block_pattern(w);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

double chain_energy(const BlockModel& m, long long boundary, const std::vector<long long>& words) {
    kahan_sum s;
    long long prev = boundary;
    for (long long w : words) {
        s.add(m.phibar2(prev, w));
        prev = w;
    }
    s.add(m.phibar2(prev, boundary));
    return s.value();
}

long long chain_energy_num(const BlockModel& m, long long boundary,
                           const std::vector<long long>& words) {
    if (!m.exact()) throw std::invalid_argument("model is not exact");
    long long s = 0;
    long long prev = boundary;
    for (long long w : words) {
        s += m.phibar2_num(prev, w);
        prev = w;
    }
    s += m.phibar2_num(prev, boundary);
    return s;
}

}  // namespace lamlab
