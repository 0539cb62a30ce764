#include "lamlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

#include "lamlab/util.hpp"

namespace lamlab {

int Hamiltonian::range() const {
    int r = 0;
    for (const auto& t : terms) r = std::max(r, t.range());
    return r;
}

static long long ipow_ll(long long b, int e) {
    long long v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > (1LL << 62) / std::max<long long>(b, 1)) throw capacity_error("table index overflow");
        v *= b;
    }
    return v;
}

void Hamiltonian::finalize() {
    if (dimension != 1) throw std::invalid_argument("only dimension-1 Hamiltonians are supported");
    if (spins.size() < 2) throw std::invalid_argument("need at least two spin values");
    {
        std::set<std::string> u(spins.begin(), spins.end());
        if (u.size() != spins.size()) throw std::invalid_argument("duplicate spin labels");
    }
    if (period < 1) throw std::invalid_argument("period must be >= 1");
    if (denom < 0) throw std::invalid_argument("denominator must be nonnegative");
    const int s = spin_count();
    for (auto& t : terms) {
        if (t.pattern.empty()) throw std::invalid_argument("empty pattern");
        if (t.pattern.front() != 0) throw std::invalid_argument("pattern must contain offset 0 first");
        for (size_t i = 0; i + 1 < t.pattern.size(); ++i)
            if (t.pattern[i] >= t.pattern[i + 1])
                throw std::invalid_argument("pattern offsets must be strictly increasing");
        if (t.pattern.front() < 0) throw std::invalid_argument("pattern offsets must be nonnegative");
        if (t.residue < 0 || t.residue >= period)
            throw std::invalid_argument("term residue out of range for period");
        const long long want = ipow_ll(s, static_cast<int>(t.pattern.size()));
        if (static_cast<long long>(t.table.size()) != want)
            throw std::invalid_argument("table size does not match pattern");
        for (double v : t.table)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite table entry");
        t.table_num.clear();
        if (denom > 0) {
            t.table_num.reserve(t.table.size());
            for (double v : t.table) {
                const double scaled = v * static_cast<double>(denom);
                const double r = std::nearbyint(scaled);
                if (std::abs(scaled - r) > 1e-9 * std::max(1.0, std::abs(scaled)))
                    throw std::invalid_argument(
                        "table entry is not an integer multiple of 1/denominator");
                // capped so that block sums and excitation sentinels stay exactly
                // representable downstream
                if (std::abs(r) > static_cast<double>(1LL << 40))
                    throw capacity_error("exact numerator too large");
                t.table_num.push_back(static_cast<long long>(r));
            }
        }
    }
}

void HamiltonianFamily::validate() const {
    if (perturbations.size() != mu.size())
        throw std::invalid_argument("family needs one coupling per perturbation");
    for (const auto& p : perturbations) {
        if (p.spins != base.spins) throw std::invalid_argument("perturbation spin set differs");
        if (p.dimension != base.dimension)
            throw std::invalid_argument("perturbation dimension differs");
    }
}

static size_t table_index(const Configuration& c, const PatternPotential& t, const Site& anchor,
                          int spin_count) {
    size_t idx = 0;
    Site p = anchor;
    for (int off : t.pattern) {
        p.c[0] = anchor.c[0] + off;
        idx = idx * static_cast<size_t>(spin_count) + c.at(p);
    }
    return idx;
}

double anchor_energy(const Configuration& c, const Hamiltonian& h, const Site& anchor) {
    double e = 0.0;
    for (const auto& t : h.terms) {
        if (mod(anchor.c[0], h.period) != t.residue) continue;
        e += t.table[table_index(c, t, anchor, h.spin_count())];
    }
    return e;
}

long long anchor_energy_num(const Configuration& c, const Hamiltonian& h, const Site& anchor) {
    if (h.denom <= 0) throw std::invalid_argument("Hamiltonian is not in exact mode");
    long long e = 0;
    for (const auto& t : h.terms) {
        if (mod(anchor.c[0], h.period) != t.residue) continue;
        e += t.table_num[table_index(c, t, anchor, h.spin_count())];
    }
    return e;
}

double window_energy(const Configuration& c, const Hamiltonian& h) {
    kahan_sum s;
    for (long long f = 0; f < c.window.volume(); ++f)
        s.add(anchor_energy(c, h, c.window.site_at(f)));
    return s.value();
}

long long window_energy_num(const Configuration& c, const Hamiltonian& h) {
    long long s = 0;
    for (long long f = 0; f < c.window.volume(); ++f)
        s += anchor_energy_num(c, h, c.window.site_at(f));
    return s;
}

// Anchors whose terms could see a differing spin: window extended leftward along axis 0 by
// the interaction range. Outside that, both configurations show the same (exterior) spins.
static void differing_anchors(const Configuration& a, const Configuration& b,
                              const Hamiltonian& h, std::vector<Site>& out) {
    if (!a.same_frame(b)) throw std::invalid_argument("configurations live on different frames");
    if (a.boundary == BoundaryMode::periodic) {
        for (long long f = 0; f < a.window.volume(); ++f) out.push_back(a.window.site_at(f));
        return;
    }
    Window w = a.window;
    w.lo[0] -= h.range();
    for (long long f = 0; f < w.volume(); ++f) out.push_back(w.site_at(f));
}

double relative_energy(const Configuration& a, const Configuration& b, const Hamiltonian& h) {
    std::vector<Site> anchors;
    differing_anchors(a, b, h, anchors);
    kahan_sum s;
    for (const Site& x : anchors) s.add(anchor_energy(a, h, x) - anchor_energy(b, h, x));
    return s.value();
}

long long relative_energy_num(const Configuration& a, const Configuration& b,
                              const Hamiltonian& h) {
    std::vector<Site> anchors;
    differing_anchors(a, b, h, anchors);
    long long s = 0;
    for (const Site& x : anchors) s += anchor_energy_num(a, h, x) - anchor_energy_num(b, h, x);
    return s;
}

static Configuration periodic_config(const std::vector<spin_t>& block, const Hamiltonian& h) {
    const int p = static_cast<int>(block.size());
    if (p == 0 || p % h.period != 0)
        throw std::invalid_argument("block length must be a positive multiple of the period");
    for (spin_t v : block)
        if (v >= h.spin_count()) throw std::invalid_argument("spin value out of range");
    Configuration c;
    c.window = Window(0, p - 1);
    c.boundary = BoundaryMode::periodic;
    c.spins = std::vector<spin_t>(block.begin(), block.end());
    return c;
}

double specific_energy(const std::vector<spin_t>& block, const Hamiltonian& h) {
    const Configuration c = periodic_config(block, h);
    return window_energy(c, h) / static_cast<double>(block.size());
}

long long specific_energy_num_per_period(const std::vector<spin_t>& block, const Hamiltonian& h) {
    const Configuration c = periodic_config(block, h);
    return window_energy_num(c, h);
}

// Determinant by LU with partial pivoting; small dense systems only.
static double det_lu(std::vector<std::vector<double>> m) {
    const size_t n = m.size();
    double det = 1.0;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            const double f = m[r][col] / m[col][col];
            for (size_t cc = col; cc < n; ++cc) m[r][cc] -= f * m[col][cc];
        }
    }
    return det;
}

NondegeneracyReport nondegeneracy_check(const HamiltonianFamily& fam,
                                        const std::vector<std::vector<spin_t>>& ground_blocks) {
    fam.validate();
    const size_t r = ground_blocks.size();
    if (r == 0) throw std::invalid_argument("no ground states given");
    if (fam.perturbations.size() + 1 < r)
        throw std::invalid_argument("need at least r-1 perturbations for r ground states");
    NondegeneracyReport rep;
    for (size_t k = 0; k + 1 < r; ++k) {
        std::vector<double> row;
        for (const auto& blk : ground_blocks)
            row.push_back(specific_energy(blk, fam.perturbations[k]));
        rep.matrix.push_back(std::move(row));
    }
    rep.matrix.push_back(std::vector<double>(r, 1.0));
    rep.det = det_lu(rep.matrix);
    rep.scale = 1.0;
    for (const auto& row : rep.matrix) {
        double nrm = 0.0;
        for (double v : row) nrm += v * v;
        rep.scale *= std::sqrt(std::max(nrm, 1e-300));
    }
    rep.condition = rep.scale / std::max(std::abs(rep.det), 1e-300);
    rep.nondegenerate = std::abs(rep.det) > 1e-9 * rep.scale;
    return rep;
}

Hamiltonian combine(const HamiltonianFamily& fam) {
    fam.validate();
    if (fam.perturbations.empty()) return fam.base;
    Hamiltonian out = fam.base;
    long long p = fam.base.period;
    for (const auto& h : fam.perturbations) p = lcm_ll(p, h.period);
    if (p > 1 << 20) throw capacity_error("combined period too large");
    out.period = static_cast<int>(p);
    out.denom = 0;  // couplings are doubles, exactness does not survive combining
    out.terms.clear();
    auto add_all = [&](const Hamiltonian& h, double scale) {
        for (const auto& t : h.terms) {
            for (int res = t.residue; res < out.period; res += h.period) {
                PatternPotential nt;
                nt.pattern = t.pattern;
                nt.residue = res;
                nt.table.reserve(t.table.size());
                for (double v : t.table) nt.table.push_back(scale * v);
                out.terms.push_back(std::move(nt));
            }
        }
    };
    add_all(fam.base, 1.0);
    for (size_t k = 0; k < fam.perturbations.size(); ++k) add_all(fam.perturbations[k], fam.mu[k]);
    out.finalize();
    return out;
}

double site_influence_bound(const Hamiltonian& h) {
    double b = 0.0;
    for (const auto& t : h.terms) {
        double mx = 0.0;
        for (double v : t.table) mx = std::max(mx, std::abs(v));
        // every offset of the pattern can land on the same site from a matching anchor,
        // so no discount for the residue structure
        b += static_cast<double>(t.pattern.size()) * mx;
    }
    return b;
}

}  // namespace lamlab
