#include "lamlab/exactz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "lamlab/util.hpp"

namespace lamlab {

namespace {

constexpr int kSiteCap = 24;
constexpr long long kAssignmentCap = 1LL << 26;

std::set<Column> admissible_cells(const std::set<Column>& vset) {
    std::set<Column> a;
    for (const Column& c : vset) {
        bool inside = true;
        for (int di = -1; di <= 1 && inside; ++di)
            for (int dk = -1; dk <= 1 && inside; ++dk)
                inside = vset.count(Column{c.i + di, c.k + dk}) > 0;
        if (inside) a.insert(c);
    }
    return a;
}

// Columns where a configuration in the restricted ensemble may deviate from the ground.
// A deviating column is either part of the boundary (hence inside the admissible area) or
// regular for some other ground; in the latter case its row must carry boundary columns on
// both sides, because along a row two distinct ground labels cannot touch (rbar exceeds
// the ground period, so overlapping strips would force the patterns to coincide).
std::set<Column> deviation_cells(const std::set<Column>& vset, const std::set<Column>& acells) {
    std::map<int, std::pair<int, int>> row_span;  // row -> [min,max] admissible i
    for (const Column& c : acells) {
        auto it = row_span.find(c.k);
        if (it == row_span.end())
            row_span[c.k] = {c.i, c.i};
        else {
            it->second.first = std::min(it->second.first, c.i);
            it->second.second = std::max(it->second.second, c.i);
        }
    }
    std::set<Column> d;
    for (const Column& c : vset) {
        if (acells.count(c)) {
            d.insert(c);
            continue;
        }
        const auto it = row_span.find(c.k);
        if (it != row_span.end() && it->second.first < c.i && c.i < it->second.second)
            d.insert(c);
    }
    return d;
}

Window scan_window(const std::vector<Column>& cols, const LaminatedModel& m) {
    int i_lo = cols[0].i, i_hi = cols[0].i, k_lo = cols[0].k, k_hi = cols[0].k;
    for (const auto& c : cols) {
        i_lo = std::min(i_lo, c.i);
        i_hi = std::max(i_hi, c.i);
        k_lo = std::min(k_lo, c.k);
        k_hi = std::max(k_hi, c.k);
    }
    const int mi = m.rbar + 3;
    return Window(i_lo - mi, i_hi + mi, (k_lo - 3) * m.l, (k_hi + 4) * m.l - 1);
}

bool contour_equal(const Contour& a, const Contour& b) {
    return a.support == b.support && a.local_config == b.local_config &&
           a.exterior_q == b.exterior_q;
}

// all real contours with exterior q whose connected support lies inside `cells`
std::vector<Contour> contour_pool(const std::vector<Column>& cells, int q,
                                  const LaminatedModel& m) {
    std::vector<Contour> out;
    const int nc = static_cast<int>(cells.size());
    if (nc == 0) return out;
    if (nc > 20) throw capacity_error("too many admissible columns for contour enumeration");
    const int spin = m.spin_count();
    const Window w = scan_window(cells, m);

    for (long long bits = 1; bits < (1LL << nc); ++bits) {
        std::vector<Column> sel;
        for (int j = 0; j < nc; ++j)
            if (bits & (1LL << j)) sel.push_back(cells[j]);
        {
            std::vector<Site> sites;
            for (const auto& c : sel) sites.emplace_back(c.i, c.k);
            if (connected_components(sites).size() != 1) continue;
        }
        std::sort(sel.begin(), sel.end());

        // supports narrower than the frustration halo can only hold constant columns
        const bool general = static_cast<int>(sel.size()) >= 2 * m.rbar + 1 && m.l > 1;
        long long states = spin;
        if (general) {
            states = 1;
            for (int t = 0; t < m.l; ++t) {
                states *= spin;
                if (states > 256) throw capacity_error("per-column state space exceeds 256");
            }
        }
        long long combos = 1;
        for (size_t j = 0; j < sel.size(); ++j) {
            combos *= states;
            if (combos > 20000000) throw capacity_error("contour enumeration too large");
        }
        for (long long a = 0; a < combos; ++a) {
            Configuration c = lift_ground(m, q, w);
            long long rest = a;
            for (const auto& col : sel) {
                long long word = rest % states;
                rest /= states;
                for (int t = 0; t < m.l; ++t) {
                    c.set(Site(col.i, col.k * m.l + t), static_cast<spin_t>(word % spin));
                    if (general) word /= spin;
                }
            }
            std::vector<Contour> found;
            try {
                found = extract_contours(c, m);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (found.size() != 1) continue;
            const Contour& g = found.front();
            if (g.support != sel || g.exterior_q != q) continue;
            bool same = true;
            for (size_t idx = 0; idx < sel.size() && same; ++idx)
                for (int t = 0; t < m.l && same; ++t)
                    same = g.local_config[idx * m.l + t] ==
                           c.at(Site(sel[idx].i, sel[idx].k * m.l + t));
            if (same) out.push_back(g);
        }
    }
    return out;
}

bool supports_distant(const Contour& a, const Contour& b, int l) {
    for (const auto& ca : a.support)
        for (const auto& cb : b.support)
            if (column_distance(ca, cb, l) <= 1) return false;
    return true;
}

bool support_in_interior(const Contour& a, const Contour& b) {
    // connected supports at distance > 1 sit inside an interior iff one column does
    for (const auto& [lab, cols] : b.interiors)
        if (std::binary_search(cols.begin(), cols.end(), a.support.front())) return true;
    return false;
}

}  // namespace

PartitionResult xi_volume(const std::vector<Column>& volume, int q, const LaminatedModel& m) {
    if (q < 0 || q >= m.ground_count()) throw std::invalid_argument("ground index out of range");
    std::set<Column> vset(volume.begin(), volume.end());
    PartitionResult r;
    if (vset.empty()) {
        r.terms = 1;
        return r;
    }
    if (static_cast<long long>(vset.size()) * m.l > kSiteCap)
        throw capacity_error("volume exceeds the 24-site enumeration cap");

    const auto acells = admissible_cells(vset);
    const auto dcells = deviation_cells(vset, acells);
    std::vector<Column> dev(dcells.begin(), dcells.end());

    const int spin = m.spin_count();
    const long long nsites = static_cast<long long>(dev.size()) * m.l;
    long long assignments = 1;
    for (long long j = 0; j < nsites; ++j) {
        assignments *= spin;
        if (assignments > kAssignmentCap) throw capacity_error("enumeration budget exhausted");
    }

    std::vector<Column> vcols(vset.begin(), vset.end());
    const Window w = scan_window(vcols, m);
    const Configuration base = lift_ground(m, q, w);
    const double beta = m.beta;

    kahan_sum total;
    for (long long a = 0; a < assignments; ++a) {
        Configuration s = base;
        long long rest = a;
        for (const auto& col : dev)
            for (int t = 0; t < m.l; ++t) {
                s.set(Site(col.i, col.k * m.l + t), static_cast<spin_t>(rest % spin));
                rest /= spin;
            }
        const auto labels = classify_columns(s, m);
        bool ok = true;
        for (const auto& [c, lab] : labels)
            if (lab.kind != ColumnKind::regular && !acells.count(c)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        for (const auto& g : extract_contours(s, m)) {
            if (!g.external) continue;
            for (const auto& [lab, cols] : g.interiors)
                for (const auto& c : cols)
                    if (!vset.count(c)) ok = false;
            if (!ok) break;
        }
        if (!ok) continue;
        total.add(std::exp(-beta * relative_energy_laminated(s, base, m)));
        ++r.terms;
    }
    r.value = total.value();
    r.log_value = std::log(r.value);
    return r;
}

PartitionResult xi_volume(const ColumnBox& box, int q, const LaminatedModel& m) {
    std::vector<Column> cols;
    for (int i = box.i_lo; i <= box.i_hi; ++i)
        for (int k = box.k_lo; k <= box.k_hi; ++k) cols.push_back(Column{i, k});
    return xi_volume(cols, q, m);
}

PartitionResult xi_contour(const Contour& g, const LaminatedModel& m) {
    long long cols = static_cast<long long>(g.support.size()) + g.volume_total();
    if (cols * m.l > kSiteCap)
        throw capacity_error("contour exceeds the 24-site enumeration cap");

    std::vector<Column> inner;
    for (const auto& [lab, ics] : g.interiors) inner.insert(inner.end(), ics.begin(), ics.end());

    const Window w = contour_window(g, m, m.rbar + 2);
    const Configuration base = lift_ground(m, g.exterior_q, w);
    const Configuration sg = standard_config(g, m, w);
    const int spin = m.spin_count();
    const long long nsites = static_cast<long long>(inner.size()) * m.l;
    long long assignments = 1;
    for (long long j = 0; j < nsites; ++j) {
        assignments *= spin;
        if (assignments > kAssignmentCap) throw capacity_error("enumeration budget exhausted");
    }

    PartitionResult r;
    r.terms = 0;
    kahan_sum total;
    for (long long a = 0; a < assignments; ++a) {
        Configuration s = sg;
        long long rest = a;
        for (const auto& col : inner)
            for (int t = 0; t < m.l; ++t) {
                s.set(Site(col.i, col.k * m.l + t), static_cast<spin_t>(rest % spin));
                rest /= spin;
            }
        std::vector<Contour> found;
        try {
            found = extract_contours(s, m);
        } catch (const std::invalid_argument&) {
            continue;
        }
        int externals = 0;
        bool match = false;
        for (const auto& f : found)
            if (f.external) {
                ++externals;
                match = contour_equal(f, g);
            }
        if (externals != 1 || !match) continue;
        total.add(std::exp(-m.beta * relative_energy_laminated(s, base, m)));
        ++r.terms;
    }
    r.value = total.value();
    r.log_value = std::log(r.value);
    return r;
}

FactorizationReport verify_factorization(const ColumnBox& box, int q, const LaminatedModel& m) {
    FactorizationReport rep;
    rep.direct = xi_volume(box, q, m);

    std::set<Column> vset;
    for (int i = box.i_lo; i <= box.i_hi; ++i)
        for (int k = box.k_lo; k <= box.k_hi; ++k) vset.insert(Column{i, k});
    const auto aset = admissible_cells(vset);
    std::vector<Column> acells(aset.begin(), aset.end());

    std::vector<Contour> pool;
    for (auto& g : contour_pool(acells, q, m)) {
        bool inside = true;
        for (const auto& [lab, cols] : g.interiors)
            for (const auto& c : cols) inside = inside && vset.count(c) > 0;
        if (inside) pool.push_back(std::move(g));
    }
    rep.pool_size = static_cast<long long>(pool.size());
    if (pool.size() > 30) throw capacity_error("contour pool too large for collection sums");

    std::vector<double> xi(pool.size());
    rep.contour_residual = 0.0;
    for (size_t j = 0; j < pool.size(); ++j) {
        const PartitionResult pr = xi_contour(pool[j], m);
        xi[j] = pr.value;
        // per-contour factorization: weight of the bare contour times interior volumes
        const Window w = contour_window(pool[j], m, m.rbar + 2);
        const double h =
            relative_energy_laminated(standard_config(pool[j], m, w), lift_ground(m, q, w), m);
        double rhs = std::exp(-m.beta * h);
        for (const auto& [lab, cols] : pool[j].interiors) rhs *= xi_volume(cols, lab, m).value;
        rep.contour_residual =
            std::max(rep.contour_residual, std::abs(pr.value - rhs) / std::max(pr.value, 1e-300));
    }

    // collections: pairwise distant supports, mutually external
    kahan_sum sum;
    sum.add(1.0);  // empty collection
    rep.collections = 1;
    std::vector<size_t> chosen;
    double product = 1.0;
    auto recurse = [&](auto&& self, size_t next, double prod) -> void {
        for (size_t j = next; j < pool.size(); ++j) {
            bool ok = true;
            for (size_t idx : chosen) {
                ok = ok && supports_distant(pool[j], pool[idx], m.l) &&
                     !support_in_interior(pool[j], pool[idx]) &&
                     !support_in_interior(pool[idx], pool[j]);
            }
            if (!ok) continue;
            chosen.push_back(j);
            sum.add(prod * xi[j]);
            ++rep.collections;
            if (rep.collections > 2000000) throw capacity_error("too many contour collections");
            self(self, j + 1, prod * xi[j]);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0, product);
    rep.collection_sum = sum.value();

    rep.volume_residual = std::abs(rep.direct.value - rep.collection_sum) /
                          std::max(rep.direct.value, 1e-300);
    rep.max_residual = std::max(rep.volume_residual, rep.contour_residual);
    return rep;
}

namespace {

// `pin_q` < 0 keeps the periodic vertical wrap; otherwise rows of the lifted ground
// `pin_q` sit directly above and below the strip
double transfer_free_energy_impl(const LaminatedModel& m, int width, double beta, int pin_q) {
    if (width < 1) throw std::invalid_argument("strip width must be positive");
    const Hamiltonian& h = m.combined;
    if (h.dimension != 1) throw std::invalid_argument("transfer oracle needs a (1+1) model");
    if (h.range() > 1)
        throw std::invalid_argument("transfer oracle handles horizontal range <= 1 only");
    const int spin = h.spin_count();
    long long states = 1;
    for (int t = 0; t < width; ++t) {
        states *= spin;
        if (states > 4096) throw capacity_error("column state space exceeds 4096");
    }
    const int n = static_cast<int>(states);
    // pinned rows repeat with the ground period on top of the interaction period
    const int p = pin_q < 0 ? h.period : std::lcm(h.period, m.ground_period());

    std::vector<std::vector<spin_t>> digit(n, std::vector<spin_t>(width));
    for (int a = 0; a < n; ++a) {
        int rest = a;
        for (int t = 0; t < width; ++t) {
            digit[a][t] = static_cast<spin_t>(rest % spin);
            rest /= spin;
        }
    }

    // in-column energy at horizontal residue j: single-site terms plus the vertical
    // bonds of the column (periodic wrap, or open run plus the two pin bonds)
    std::vector<std::vector<double>> intra(p, std::vector<double>(n, 0.0));
    for (int j = 0; j < p; ++j)
        for (int a = 0; a < n; ++a) {
            kahan_sum e;
            if (pin_q < 0) {
                if (width > 1)
                    for (int t = 0; t < width; ++t)
                        e.add(m.vertical.bond(digit[a][t], digit[a][(t + 1) % width]));
            } else {
                for (int t = 0; t + 1 < width; ++t)
                    e.add(m.vertical.bond(digit[a][t], digit[a][t + 1]));
                const spin_t g = m.ground_pattern(pin_q)[mod(j, m.ground_period())];
                e.add(m.vertical.bond(g, digit[a][0]));
                e.add(m.vertical.bond(digit[a][width - 1], g));
            }
            for (const auto& term : h.terms) {
                if (term.pattern.size() != 1 || term.residue != mod(j, h.period)) continue;
                for (int t = 0; t < width; ++t) e.add(term.table[digit[a][t]]);
            }
            intra[j][a] = e.value();
        }

    std::vector<std::vector<double>> mats(p, std::vector<double>(static_cast<size_t>(n) * n));
    kahan_sum shift;  // per-matrix minimum energies, restored at the end
    for (int j = 0; j < p; ++j) {
        std::vector<double> energy(static_cast<size_t>(n) * n);
        double emin = 0.0;
        bool first = true;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                kahan_sum e;
                e.add(intra[j][a]);
                for (const auto& term : h.terms) {
                    if (term.pattern.size() != 2 || term.residue != mod(j, h.period)) continue;
                    for (int t = 0; t < width; ++t)
                        e.add(term.table[digit[a][t] * spin + digit[b][t]]);
                }
                energy[static_cast<size_t>(a) * n + b] = e.value();
                if (first || e.value() < emin) emin = e.value();
                first = false;
            }
        shift.add(emin);
        for (size_t idx = 0; idx < energy.size(); ++idx)
            mats[j][idx] = std::exp(-beta * (energy[idx] - emin));
    }

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n))), wv(n);
    double f_prev = 0.0;
    double log_lambda = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
        double grow = 0.0;
        for (int j = p - 1; j >= 0; --j) {
            for (int a = 0; a < n; ++a) {
                kahan_sum row;
                for (int b = 0; b < n; ++b)
                    row.add(mats[j][static_cast<size_t>(a) * n + b] * v[b]);
                wv[a] = row.value();
            }
            double norm = 0.0;
            for (int a = 0; a < n; ++a) norm += wv[a] * wv[a];
            norm = std::sqrt(norm);
            if (norm <= 0.0) throw std::runtime_error("transfer operator collapsed to zero");
            grow += std::log(norm);
            for (int a = 0; a < n; ++a) v[a] = wv[a] / norm;
        }
        log_lambda = grow;
        const double f = (log_lambda - beta * shift.value()) / (static_cast<double>(p) * width);
        if (iter > 2 && std::abs(f - f_prev) < 1e-12 * std::max(1.0, std::abs(f))) return f;
        f_prev = f;
    }
    throw std::runtime_error("transfer power iteration did not converge");
}

}  // namespace

double transfer_free_energy(const LaminatedModel& m, int width, double beta) {
    return transfer_free_energy_impl(m, width, beta, -1);
}

double transfer_free_energy_pinned(const LaminatedModel& m, int width, double beta, int q) {
    if (q < 0 || q >= m.ground_count()) throw std::invalid_argument("ground index out of range");
    return transfer_free_energy_impl(m, width, beta, q);
}

}  // namespace lamlab
