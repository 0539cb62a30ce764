#include "lamlab/laminate.hpp"

#include <cmath>
#include <stdexcept>

#include "lamlab/util.hpp"

namespace lamlab {

LaminatedModel build_laminated(const HamiltonianFamily& fam, double lambda, int l, int rbar,
                               double beta, double rel_tol) {
    fam.validate();
    if (lambda < 0) throw std::invalid_argument("vertical coupling must be nonnegative");
    if (l < 1) throw std::invalid_argument("aggregation size must be at least 1");
    if (beta <= 0) throw std::invalid_argument("beta must be positive");

    LaminatedModel m;
    m.horizontal = fam;
    m.combined = combine(fam);
    m.vertical.lambda = lambda;
    m.l = l;
    m.beta = beta;
    m.ground = ground_states(fam.base, 0, rel_tol);

    // adjacent regular strips overlap in 2*rbar >= 2*period columns, enough to pin one
    // full ground period, so covering the range/period/block is sufficient
    const int needed = std::max({m.combined.range(), m.combined.period, m.ground.model.block_size});
    if (rbar < needed)
        throw std::invalid_argument("influence radius must cover range, period and block size");
    m.rbar = rbar;
    return m;
}

Configuration lift_ground(const LaminatedModel& m, int q, const Window& w) {
    if (q < 0 || q >= m.ground_count()) throw std::invalid_argument("ground index out of range");
    if (w.dim != 2) throw std::invalid_argument("laminated windows are two-dimensional");
    Configuration c;
    c.window = w;
    c.boundary = BoundaryMode::fixed;
    c.exterior = m.ground_pattern(q);
    c.exterior_label = q;
    c.spins.resize(w.volume());
    for (long long f = 0; f < w.volume(); ++f) {
        const Site s = w.site_at(f);
        c.spins[f] = c.exterior[mod(s.c[0], static_cast<int>(c.exterior.size()))];
    }
    return c;
}

double relative_horizontal(const Configuration& a, const Configuration& b,
                           const LaminatedModel& m) {
    return relative_energy(a, b, m.combined);
}

double relative_vertical(const Configuration& a, const Configuration& b,
                         const LaminatedModel& m) {
    if (!a.same_frame(b)) throw std::invalid_argument("configurations live on different frames");
    if (a.window.dim != 2) throw std::invalid_argument("laminated windows are two-dimensional");
    kahan_sum s;
    const bool periodic = a.boundary == BoundaryMode::periodic;
    for (long long f = 0; f < a.window.volume(); ++f) {
        const Site x = a.window.site_at(f);
        Site up = x;
        up.c[1] += 1;
        s.add(m.vertical.bond(a.at(x), a.at(up)) - m.vertical.bond(b.at(x), b.at(up)));
        if (!periodic) {
            Site dn = x;
            dn.c[1] -= 1;
            if (!a.window.contains(dn))
                s.add(m.vertical.bond(a.at(dn), a.at(x)) - m.vertical.bond(b.at(dn), b.at(x)));
        }
    }
    return s.value();
}

double relative_energy_laminated(const Configuration& a, const Configuration& b,
                                 const LaminatedModel& m) {
    return relative_horizontal(a, b, m) + relative_vertical(a, b, m);
}

double window_energy_laminated(const Configuration& c, const LaminatedModel& m) {
    if (c.window.dim != 2) throw std::invalid_argument("laminated windows are two-dimensional");
    kahan_sum s;
    s.add(window_energy(c, m.combined));
    const bool periodic = c.boundary == BoundaryMode::periodic;
    for (long long f = 0; f < c.window.volume(); ++f) {
        const Site x = c.window.site_at(f);
        Site up = x;
        up.c[1] += 1;
        s.add(m.vertical.bond(c.at(x), c.at(up)));
        if (!periodic) {
            Site dn = x;
            dn.c[1] -= 1;
            if (!c.window.contains(dn)) s.add(m.vertical.bond(c.at(dn), c.at(x)));
        }
    }
    return s.value();
}

double ground_field(const LaminatedModel& m, int q) {
    if (q < 0 || q >= m.ground_count()) throw std::invalid_argument("ground index out of range");
    kahan_sum s;
    for (size_t k = 0; k < m.horizontal.perturbations.size(); ++k)
        s.add(m.horizontal.mu[k] *
              specific_energy(m.ground_pattern(q), m.horizontal.perturbations[k]));
    return s.value();
}

static ParameterReport finish_report(ParameterReport r) {
    if (r.rho <= 0) throw std::invalid_argument("excitation margin must be positive");
    if (r.beta <= 0) throw std::invalid_argument("beta must be positive");
    r.l_min = static_cast<int>(std::ceil(r.u / (r.beta * r.rho) - 1e-12));
    if (r.l_min < 1) r.l_min = 1;
    r.lambda0 = (r.u + r.v * r.l_min) / r.beta;
    if (!(r.beta * r.rho * r.l_min >= r.u - 1e-9) ||
        !(r.beta * r.lambda0 >= r.u + r.v * r.l_min - 1e-9))
        throw std::runtime_error("internal: parameter inequalities violated");
    return r;
}

ParameterReport choose_parameters(double beta, double rho, double tau, int spin_count) {
    if (tau <= 0) throw std::invalid_argument("tau must be positive");
    if (spin_count < 2) throw std::invalid_argument("need at least two spin values");
    ParameterReport r;
    r.beta = beta;
    r.rho = rho;
    r.tau = tau;
    r.from_tau = true;
    r.u = tau + std::log(static_cast<double>(spin_count)) + 2.0 * std::log(3.0);
    r.v = std::max(1.0, std::log(static_cast<double>(spin_count)));
    return finish_report(r);
}

ParameterReport choose_parameters_uv(double beta, double rho, double u, double v) {
    if (u <= 0 || v <= 0) throw std::invalid_argument("functional constants must be positive");
    ParameterReport r;
    r.beta = beta;
    r.rho = rho;
    r.u = u;
    r.v = v;
    return finish_report(r);
}

ParameterReport default_margin(const LaminatedModel& m, double tau) {
    double shrink = 0.0;
    for (size_t k = 0; k < m.horizontal.perturbations.size(); ++k)
        shrink += std::abs(m.horizontal.mu[k]) * 2.0 *
                  site_influence_bound(m.horizontal.perturbations[k]);
    // an isolated wall between two ground runs costs one bond's worth of energy per layer
    // but defects up to 2*rbar columns there, while the excitation rate counts roughly two
    // boundary sites per wall; the per-column rate must shrink accordingly
    const double base = m.ground.peierls_c / (m.ground.model.block_size * m.rbar);
    const double rho = base - shrink;
    if (rho <= 0) throw std::invalid_argument("perturbations too large for a positive margin");
    ParameterReport r = choose_parameters(m.beta, rho, tau, m.spin_count());
    r.shrink = shrink;
    return r;
}

}  // namespace lamlab
