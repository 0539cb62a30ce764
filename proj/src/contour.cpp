#include "lamlab/contour.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lamlab/util.hpp"

namespace lamlab {

int column_distance(const Column& a, const Column& b, int l) {
    const int dx = std::abs(a.i - b.i);
    const int dk = std::abs(a.k - b.k);
    const int dt = dk == 0 ? 0 : (dk - 1) * l + 1;
    return std::max(dx, dt);
}

int ColumnBox::site_diameter(int l) const {
    if (columns() == 0) return 0;
    return std::max(i_hi - i_lo, (k_hi - k_lo + 1) * l - 1);
}

Window ColumnBox::window(int l) const {
    if (columns() == 0) throw std::invalid_argument("empty column box");
    return Window(i_lo, i_hi, k_lo * l, (k_hi + 1) * l - 1);
}

long long Contour::volume(int m) const {
    const auto it = interiors.find(m);
    return it == interiors.end() ? 0 : static_cast<long long>(it->second.size());
}

long long Contour::volume_total() const {
    long long v = 0;
    for (const auto& [m, cols] : interiors) v += static_cast<long long>(cols.size());
    return v;
}

namespace {

int support_site_diameter(const std::vector<Column>& cols, int l) {
    if (cols.empty()) return 0;
    int i_lo = cols[0].i, i_hi = cols[0].i, k_lo = cols[0].k, k_hi = cols[0].k;
    for (const auto& c : cols) {
        i_lo = std::min(i_lo, c.i);
        i_hi = std::max(i_hi, c.i);
        k_lo = std::min(k_lo, c.k);
        k_hi = std::max(k_hi, c.k);
    }
    return std::max(i_hi - i_lo, (k_hi - k_lo + 1) * l - 1);
}

// value of a column if constant, -1 if it varies
int column_value(const Configuration& s, int l, int i, int k) {
    Site x(i, k * l);
    const spin_t v0 = s.at(x);
    for (int t = 1; t < l; ++t) {
        x.c[1] = k * l + t;
        if (s.at(x) != v0) return -1;
    }
    return v0;
}

struct BaseLabel {
    ColumnKind kind = ColumnKind::regular;  // never faced at this stage
    int q = -1;
};

BaseLabel base_label(const Configuration& s, const LaminatedModel& m, int i, int k) {
    const int rbar = m.rbar;
    std::vector<int> vals(2 * rbar + 1);
    for (int j = -rbar; j <= rbar; ++j) {
        vals[j + rbar] = column_value(s, m.l, i + j, k);
        if (vals[j + rbar] < 0) return {ColumnKind::frustrated, -1};
    }
    const int p = m.ground_period();
    for (int q = 0; q < m.ground_count(); ++q) {
        const auto& pat = m.ground_pattern(q);
        bool ok = true;
        for (int j = -rbar; j <= rbar && ok; ++j)
            ok = vals[j + rbar] == pat[mod(i + j, p)];
        if (ok) return {ColumnKind::regular, q};
    }
    return {ColumnKind::defective, -1};
}

ColumnLabel with_faced(const BaseLabel& own, const BaseLabel& below, const BaseLabel& above) {
    ColumnLabel out;
    if (own.kind != ColumnKind::regular) {
        out.kind = own.kind;
        return out;
    }
    out.q = own.q;
    if (above.kind == ColumnKind::regular && above.q != own.q) {
        out.kind = ColumnKind::faced;
        out.q2 = above.q;
    } else if (below.kind == ColumnKind::regular && below.q != own.q) {
        out.kind = ColumnKind::faced;
        out.q2 = below.q;
    } else {
        out.kind = ColumnKind::regular;
    }
    return out;
}

void check_window(const Configuration& s, const LaminatedModel& m) {
    if (s.window.dim != 2) throw std::invalid_argument("laminated windows are two-dimensional");
    if (s.boundary != BoundaryMode::fixed)
        throw std::invalid_argument("contour machinery needs fixed boundaries");
    if (mod(s.window.lo[1], m.l) != 0 || mod(s.window.hi[1] + 1, m.l) != 0)
        throw std::invalid_argument("window is not aligned to the column grid");
}

}  // namespace

ColumnLabel classify_column(const Configuration& s, const LaminatedModel& m, const Column& c) {
    const BaseLabel own = base_label(s, m, c.i, c.k);
    const BaseLabel below = base_label(s, m, c.i, c.k - 1);
    const BaseLabel above = base_label(s, m, c.i, c.k + 1);
    return with_faced(own, below, above);
}

std::map<Column, ColumnLabel> classify_columns(const Configuration& s, const LaminatedModel& m) {
    check_window(s, m);
    const int ci_lo = s.window.lo[0], ci_hi = s.window.hi[0];
    const int ck_lo = s.window.lo[1] / m.l;
    const int ck_hi = (s.window.hi[1] + 1) / m.l - 1;
    // base labels one row beyond the grid feed the faced upgrade
    std::map<std::pair<int, int>, BaseLabel> base;
    for (int i = ci_lo; i <= ci_hi; ++i)
        for (int k = ck_lo - 1; k <= ck_hi + 1; ++k)
            base[{i, k}] = base_label(s, m, i, k);
    std::map<Column, ColumnLabel> out;
    for (int i = ci_lo; i <= ci_hi; ++i)
        for (int k = ck_lo; k <= ck_hi; ++k) {
            const Column c{i, k};
            out[c] = with_faced(base[{i, k}], base[{i, k - 1}], base[{i, k + 1}]);
        }
    return out;
}

namespace {

// consensus regular label among `region` columns adjacent to `blocked`; throws when the
// region shows two labels (malformed configuration) or none at all
int ring_label(const std::set<Column>& region, const std::set<Column>& blocked,
               const std::map<Column, ColumnLabel>& labels) {
    int found = -1;
    for (const Column& c : region) {
        bool adj = false;
        for (int di = -1; di <= 1 && !adj; ++di)
            for (int dk = -1; dk <= 1 && !adj; ++dk)
                adj = blocked.count(Column{c.i + di, c.k + dk}) > 0;
        if (!adj) continue;
        const auto it = labels.find(c);
        if (it == labels.end()) continue;
        if (it->second.kind != ColumnKind::regular) continue;
        if (found < 0)
            found = it->second.q;
        else if (found != it->second.q)
            throw std::invalid_argument("ambiguous region label around a contour");
    }
    if (found < 0) throw std::invalid_argument("no regular column adjacent to a contour");
    return found;
}

std::vector<std::vector<Column>> column_components(const std::vector<Column>& cols) {
    std::vector<Site> sites;
    sites.reserve(cols.size());
    for (const auto& c : cols) sites.emplace_back(c.i, c.k);
    std::vector<std::vector<Column>> out;
    for (const auto& comp : connected_components(sites)) {
        std::vector<Column> cc;
        cc.reserve(comp.size());
        for (const auto& s : comp) cc.push_back(Column{s.c[0], s.c[1]});
        std::sort(cc.begin(), cc.end());
        out.push_back(std::move(cc));
    }
    return out;
}

}  // namespace

std::vector<Contour> extract_contours(const Configuration& s, const LaminatedModel& m) {
    const auto labels = classify_columns(s, m);
    const int ci_lo = s.window.lo[0], ci_hi = s.window.hi[0];
    const int ck_lo = s.window.lo[1] / m.l;
    const int ck_hi = (s.window.hi[1] + 1) / m.l - 1;

    std::vector<Column> support;
    for (const auto& [c, lab] : labels)
        if (lab.kind != ColumnKind::regular) support.push_back(c);
    if (support.empty()) return {};

    for (const auto& c : support)
        if (c.i <= ci_lo || c.i >= ci_hi || c.k <= ck_lo || c.k >= ck_hi)
            throw std::invalid_argument("boundary touches the window frame; window too small");

    const auto comps = column_components(support);

    std::vector<Contour> out;
    for (const auto& comp : comps) {
        Contour g;
        g.support = comp;
        const std::set<Column> mask(comp.begin(), comp.end());

        // flood from the frame ring with only this support blocked
        std::set<Column> reach;
        std::vector<Column> stack;
        for (int i = ci_lo; i <= ci_hi; ++i)
            for (int k = ck_lo; k <= ck_hi; ++k)
                if (i == ci_lo || i == ci_hi || k == ck_lo || k == ck_hi) {
                    const Column c{i, k};
                    if (!mask.count(c) && reach.insert(c).second) stack.push_back(c);
                }
        while (!stack.empty()) {
            const Column c = stack.back();
            stack.pop_back();
            for (int di = -1; di <= 1; ++di)
                for (int dk = -1; dk <= 1; ++dk) {
                    const Column n{c.i + di, c.k + dk};
                    if (n.i < ci_lo || n.i > ci_hi || n.k < ck_lo || n.k > ck_hi) continue;
                    if (mask.count(n) || reach.count(n)) continue;
                    reach.insert(n);
                    stack.push_back(n);
                }
        }

        g.exterior_q = ring_label(reach, mask, labels);

        std::vector<Column> inside;
        for (int i = ci_lo; i <= ci_hi; ++i)
            for (int k = ck_lo; k <= ck_hi; ++k) {
                const Column c{i, k};
                if (!mask.count(c) && !reach.count(c)) inside.push_back(c);
            }
        for (const auto& icomp : column_components(inside)) {
            const std::set<Column> iset(icomp.begin(), icomp.end());
            const int lab = ring_label(iset, mask, labels);
            auto& dst = g.interiors[lab];
            dst.insert(dst.end(), icomp.begin(), icomp.end());
        }
        for (auto& [lab, cols] : g.interiors) std::sort(cols.begin(), cols.end());

        for (const auto& c : comp) {
            const ColumnKind kind = labels.at(c).kind;
            if (kind == ColumnKind::faced) ++g.n_b;
            if (kind == ColumnKind::frustrated) ++g.n_c;
            if (kind == ColumnKind::defective) ++g.n_d;
            for (int t = 0; t < m.l; ++t)
                g.local_config.push_back(s.at(Site(c.i, c.k * m.l + t)));
        }
        g.diameter = support_site_diameter(comp, m.l);
        out.push_back(std::move(g));
    }

    // a contour is external unless its support sits in another contour's interior
    for (auto& g : out) {
        g.external = true;
        for (const auto& other : out) {
            if (&other == &g) continue;
            for (const auto& [lab, cols] : other.interiors)
                if (std::binary_search(cols.begin(), cols.end(), g.support.front()))
                    g.external = false;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Contour& a, const Contour& b) { return a.support < b.support; });
    return out;
}

Configuration standard_config(const Contour& g, const LaminatedModel& m, const Window& w) {
    if (w.dim != 2) throw std::invalid_argument("laminated windows are two-dimensional");
    Configuration c = lift_ground(m, g.exterior_q, w);
    for (const auto& [lab, cols] : g.interiors) {
        const auto& pat = m.ground_pattern(lab);
        for (const auto& col : cols)
            for (int t = 0; t < m.l; ++t) {
                const Site x(col.i, col.k * m.l + t);
                if (!w.contains(x)) throw std::invalid_argument("window does not cover contour");
                c.set(x, pat[mod(col.i, m.ground_period())]);
            }
    }
    for (size_t idx = 0; idx < g.support.size(); ++idx)
        for (int t = 0; t < m.l; ++t) {
            const Site x(g.support[idx].i, g.support[idx].k * m.l + t);
            if (!w.contains(x)) throw std::invalid_argument("window does not cover contour");
            c.set(x, g.local_config[idx * m.l + t]);
        }
    return c;
}

Window contour_window(const Contour& g, const LaminatedModel& m, int margin_cols) {
    if (g.support.empty()) throw std::invalid_argument("empty contour");
    int i_lo = g.support[0].i, i_hi = g.support[0].i;
    int k_lo = g.support[0].k, k_hi = g.support[0].k;
    auto fold = [&](const Column& c) {
        i_lo = std::min(i_lo, c.i);
        i_hi = std::max(i_hi, c.i);
        k_lo = std::min(k_lo, c.k);
        k_hi = std::max(k_hi, c.k);
    };
    for (const auto& c : g.support) fold(c);
    for (const auto& [lab, cols] : g.interiors)
        for (const auto& c : cols) fold(c);
    ColumnBox b{i_lo - margin_cols, i_hi + margin_cols, k_lo - margin_cols, k_hi + margin_cols};
    return b.window(m.l);
}

PsiReport psi_decompose(const Contour& g, const LaminatedModel& m) {
    const Window w = contour_window(g, m, m.rbar + 2);
    const Configuration sg = standard_config(g, m, w);
    const Configuration sq = lift_ground(m, g.exterior_q, w);

    PsiReport rep;
    rep.h_rel = relative_energy_laminated(sg, sq, m);
    kahan_sum corr;
    const double hq = ground_field(m, g.exterior_q);
    for (const auto& [lab, cols] : g.interiors)
        corr.add((ground_field(m, lab) - hq) * m.l * static_cast<double>(cols.size()));
    rep.correction = corr.value();
    rep.psi = rep.h_rel - rep.correction;
    rep.psi_v = relative_vertical(sg, sq, m);
    rep.psi_g = rep.psi - rep.psi_v;

    // per-layer horizontal part: pattern terms attributed to their anchor layer, minus the
    // interior correction spread over the layers its columns actually cross
    rep.t_lo = w.lo[1];
    std::map<int, std::map<int, long long>> int_cols_at_row;  // label -> row -> count
    for (const auto& [lab, cols] : g.interiors)
        for (const auto& c : cols) ++int_cols_at_row[lab][c.k];
    const int range = m.combined.range();
    for (int t = w.lo[1]; t <= w.hi[1]; ++t) {
        kahan_sum layer;
        for (int x = w.lo[0] - range; x <= w.hi[0]; ++x) {
            const Site a(x, t);
            layer.add(anchor_energy(sg, m.combined, a) - anchor_energy(sq, m.combined, a));
        }
        const int row = t >= 0 ? t / m.l : -((-t - 1) / m.l + 1);
        for (const auto& [lab, rows] : int_cols_at_row) {
            const auto it = rows.find(row);
            if (it != rows.end())
                layer.add(-(ground_field(m, lab) - hq) * static_cast<double>(it->second));
        }
        rep.psi_g_layers.push_back(layer.value());
    }
    return rep;
}

BoundAudit audit_bounds(const Contour& g, const LaminatedModel& m, double rho, double u,
                        double v) {
    BoundAudit a;
    a.psi = psi_decompose(g, m);
    a.n_b = g.n_b;
    a.n_c = g.n_c;
    a.n_d = g.n_d;
    a.norm = g.norm();
    a.rho = rho;
    a.u = u;
    a.v = v;

    for (size_t idx = 0; idx < g.support.size(); ++idx) {
        bool constant = true;
        for (int t = 1; t < m.l; ++t)
            constant = constant && g.local_config[idx * m.l + t] == g.local_config[idx * m.l];
        if (!constant) ++a.variable_columns;
    }
    std::set<Column> sup(g.support.begin(), g.support.end());
    for (size_t idx = 0; idx < g.support.size(); ++idx) {
        const Column up{g.support[idx].i, g.support[idx].k + 1};
        const auto it = std::find(g.support.begin(), g.support.end(), up);
        if (it == g.support.end()) continue;
        const size_t jdx = static_cast<size_t>(it - g.support.begin());
        if (g.local_config[idx * m.l + m.l - 1] != g.local_config[jdx * m.l])
            ++a.differing_interfaces;
    }

    // defective columns per row come from re-classifying the standard configuration
    const Window w = contour_window(g, m, m.rbar + 2);
    const Configuration sg = standard_config(g, m, w);
    const auto labels = classify_columns(sg, m);
    std::map<int, long long> nd_row;
    for (const auto& [c, lab] : labels)
        if (lab.kind == ColumnKind::defective) ++nd_row[c.k];

    const double lam = m.vertical.lambda;
    const double beta = m.beta;
    const double eps = 1e-9;

    a.layer_min_slack = 0.0;
    bool first = true;
    for (size_t j = 0; j < a.psi.psi_g_layers.size(); ++j) {
        const int t = a.psi.t_lo + static_cast<int>(j);
        const int row = t >= 0 ? t / m.l : -((-t - 1) / m.l + 1);
        const auto it = nd_row.find(row);
        const double nd = it == nd_row.end() ? 0.0 : static_cast<double>(it->second);
        const double slack = a.psi.psi_g_layers[j] - rho * nd;
        if (first || slack < a.layer_min_slack) a.layer_min_slack = slack;
        first = false;
    }
    a.layer_pass = a.layer_min_slack >= -eps;

    a.horizontal_slack = a.psi.psi_g - rho * m.l * static_cast<double>(a.n_d);
    a.horizontal_pass = a.horizontal_slack >= -eps;

    a.vertical_slack = a.psi.psi_v - lam * static_cast<double>(a.n_b + a.n_c);
    a.vertical_pass = a.vertical_slack >= -eps;

    a.vertical_sound_slack =
        a.psi.psi_v - lam * static_cast<double>(a.variable_columns + a.differing_interfaces);
    a.vertical_sound_pass = a.vertical_sound_slack >= -eps;

    a.combined_slack = beta * a.psi.psi - beta * rho * m.l * static_cast<double>(a.n_d) -
                       beta * lam * static_cast<double>(a.n_b + a.n_c);
    a.combined_pass = a.combined_slack >= -eps;

    a.decay_lhs = beta * a.psi.psi;
    a.decay_rhs = (u + 1.0) * static_cast<double>(a.norm) + v * m.l * static_cast<double>(a.n_c);
    a.decay_slack = a.decay_lhs - a.decay_rhs;
    a.decay_pass = a.decay_slack >= -eps;
    return a;
}

std::vector<Contour> enumerate_contours(const ColumnBox& box, int q, int max_columns,
                                        const LaminatedModel& m) {
    if (box.i_hi - box.i_lo + 1 > 8 || box.k_hi - box.k_lo + 1 > 8)
        throw capacity_error("contour enumeration boxes are capped at 8x8 columns");
    if (q < 0 || q >= m.ground_count()) throw std::invalid_argument("ground index out of range");
    std::vector<Contour> out;
    if (max_columns <= 0 || box.columns() == 0) return out;

    // admissible support cells: distance > 1 from the box complement
    std::vector<Column> cells;
    for (int i = box.i_lo + 1; i <= box.i_hi - 1; ++i)
        for (int k = box.k_lo + 1; k <= box.k_hi - 1; ++k) cells.push_back(Column{i, k});
    const int nc = static_cast<int>(cells.size());
    if (nc == 0) return out;
    if (nc > 20) throw capacity_error("contour enumeration is capped at 20 support cells");

    const int spin = m.spin_count();
    const Window w(box.i_lo - (m.rbar + 2), box.i_hi + (m.rbar + 2), (box.k_lo - 2) * m.l,
                   (box.k_hi + 3) * m.l - 1);

    for (int bits = 1; bits < (1 << nc); ++bits) {
        std::vector<Column> sel;
        for (int j = 0; j < nc; ++j)
            if (bits & (1 << j)) sel.push_back(cells[j]);
        if (static_cast<int>(sel.size()) > max_columns) continue;
        if (column_components(sel).size() != 1) continue;

        // a variable column frustrates its whole horizontal halo, so supports narrower than
        // the halo can only carry constant columns; that keeps states independent of l
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
                    const spin_t val = static_cast<spin_t>(word % spin);
                    if (general) word /= spin;
                    c.set(Site(col.i, col.k * m.l + t), val);
                }
            }
            std::vector<Contour> found;
            try {
                found = extract_contours(c, m);
            } catch (const std::invalid_argument&) {
                continue;  // halo escaped the admissible area
            }
            if (found.size() != 1) continue;
            const Contour& g = found.front();
            if (g.support != sel || g.exterior_q != q) continue;
            bool same = true;
            for (size_t idx = 0; idx < sel.size() && same; ++idx)
                for (int t = 0; t < m.l && same; ++t)
                    same = g.local_config[idx * m.l + t] ==
                           c.at(Site(sel[idx].i, sel[idx].k * m.l + t));
            if (!same) continue;
            out.push_back(g);
        }
    }
    std::sort(out.begin(), out.end(), [](const Contour& a, const Contour& b) {
        if (a.support != b.support) return a.support < b.support;
        return a.local_config < b.local_config;
    });
    return out;
}

CollectionBound collection_weight_bound(const std::vector<Contour>& collection,
                                        const ColumnBox& box, int l, double c) {
    if (c <= 1.0) throw std::invalid_argument("weight base must exceed 1");
    if (box.columns() == 0) throw std::invalid_argument("empty box");
    for (const auto& g : collection)
        for (const auto& col : g.support)
            if (col.i <= box.i_lo || col.i >= box.i_hi || col.k <= box.k_lo || col.k >= box.k_hi)
                throw std::invalid_argument("support not distant from the box complement");
    for (size_t a = 0; a < collection.size(); ++a)
        for (size_t b = a + 1; b < collection.size(); ++b)
            for (const auto& ca : collection[a].support)
                for (const auto& cb : collection[b].support)
                    if (column_distance(ca, cb, l) <= 1)
                        throw std::invalid_argument("supports are not pairwise distant");

    CollectionBound r;
    kahan_sum lhs;
    for (const auto& g : collection)
        lhs.add(static_cast<double>(g.norm() + g.volume_total()) *
                std::pow(c, static_cast<double>(g.diameter)));
    r.lhs = lhs.value();
    r.rhs = std::pow(c, static_cast<double>(box.site_diameter(l))) / (c - 1.0) *
            static_cast<double>(box.columns());
    r.pass = r.lhs < r.rhs;
    return r;
}

Contour make_geometric_contour(std::vector<Column> support, int l,
                               std::map<int, std::vector<Column>> interiors) {
    if (support.empty()) throw std::invalid_argument("empty contour");
    Contour g;
    std::sort(support.begin(), support.end());
    g.support = std::move(support);
    for (auto& [lab, cols] : interiors) std::sort(cols.begin(), cols.end());
    g.interiors = std::move(interiors);
    g.diameter = support_site_diameter(g.support, l);
    return g;
}

}  // namespace lamlab
