#include "lamlab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "lamlab/contour.hpp"
#include "lamlab/util.hpp"

namespace lamlab {

double delta_energy(const Configuration& c, const LaminatedModel& m, const Site& x, spin_t v,
                    bool wrap_vertical) {
    const spin_t cur = c.at(x);
    if (v == cur) return 0.0;
    const Hamiltonian& h = m.combined;
    kahan_sum d;
    for (const auto& term : h.terms) {
        for (int offset : term.pattern) {
            const int ax = x.c[0] - offset;
            if (mod(ax, h.period) != term.residue) continue;
            long long idx_old = 0, idx_new = 0;
            for (int p : term.pattern) {
                const Site y(ax + p, x.c[1]);
                const spin_t s_old = c.at(y);
                const spin_t s_new = (ax + p == x.c[0]) ? v : s_old;
                idx_old = idx_old * h.spin_count() + s_old;
                idx_new = idx_new * h.spin_count() + s_new;
            }
            d.add(term.table[idx_new] - term.table[idx_old]);
        }
    }
    const int t_lo = c.window.lo[1], rows = c.window.hi[1] - c.window.lo[1] + 1;
    for (int dt : {-1, 1}) {
        int tn = x.c[1] + dt;
        if (wrap_vertical) tn = t_lo + mod(tn - t_lo, rows);
        const spin_t s = c.at(Site(x.c[0], tn));
        d.add(m.vertical.bond(v, s) - m.vertical.bond(cur, s));
    }
    return d.value();
}

std::vector<double> order_parameters(const Configuration& s, const LaminatedModel& m) {
    const auto labels = classify_columns(s, m);
    std::vector<double> frac(m.ground_count(), 0.0);
    for (const auto& [c, lab] : labels)
        if (lab.kind == ColumnKind::regular) frac[lab.q] += 1.0;
    const double total = static_cast<double>(labels.size());
    for (double& f : frac) f /= total;
    return frac;
}

double bulk_energy_density(const Configuration& c, const LaminatedModel& m, int margin,
                           bool wrap_vertical) {
    const Window& w = c.window;
    int mg = std::max(0, margin);
    mg = std::min(mg, (w.hi[0] - w.lo[0]) / 2);
    mg = std::min(mg, (w.hi[1] - w.lo[1]) / 2);
    const int rows = w.hi[1] - w.lo[1] + 1;
    kahan_sum e;
    long long sites = 0;
    for (int i = w.lo[0] + mg; i <= w.hi[0] - mg; ++i)
        for (int t = w.lo[1] + mg; t <= w.hi[1] - mg; ++t) {
            const Site x(i, t);
            int up = t + 1;
            if (wrap_vertical) up = w.lo[1] + mod(up - w.lo[1], rows);
            e.add(anchor_energy(c, m.combined, x));
            e.add(m.vertical.bond(c.at(x), c.at(Site(i, up))));
            ++sites;
        }
    return e.value() / static_cast<double>(sites);
}

namespace {

double lag1_autocorrelation(const std::vector<double>& e) {
    const size_t n = e.size();
    if (n < 3) return 0.0;
    double mean = 0.0;
    for (double x : e) mean += x;
    mean /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        den += (e[i] - mean) * (e[i] - mean);
        if (i + 1 < n) num += (e[i] - mean) * (e[i + 1] - mean);
    }
    if (den <= 0.0) return 0.0;
    return num / den;
}

}  // namespace

std::vector<Measurement> run_chain(const ChainSpec& spec, const LaminatedModel& m,
                                   Configuration* final_state) {
    if (spec.window.dim != 2) throw std::invalid_argument("chains run on two-dimensional windows");
    if (spec.thermalization < 0 || spec.sweeps <= spec.thermalization)
        throw std::invalid_argument("need sweeps > thermalization >= 0");
    if (spec.stride < 1) throw std::invalid_argument("measurement stride must be positive");
    if (spec.boundary_q < 0 || spec.boundary_q >= m.ground_count())
        throw std::invalid_argument("boundary label out of range");
    if (mod(spec.window.lo[1], m.l) != 0 || mod(spec.window.hi[1] + 1, m.l) != 0)
        throw std::invalid_argument("window is not aligned to the column grid");
    if (spec.wrap_vertical && spec.window.hi[1] - spec.window.lo[1] + 1 < 2)
        throw std::invalid_argument("vertical wrap needs at least two rows");

    Configuration c = lift_ground(m, spec.boundary_q, spec.window);
    splitmix64 rng(spec.seed);
    const int spin = m.spin_count();
    const double beta = spec.beta;

    std::vector<Measurement> series;
    std::vector<double> energies;
    long long attempted = 0, accepted = 0;

    for (long long sweep = 1; sweep <= spec.sweeps; ++sweep) {
        for (int i = spec.window.lo[0]; i <= spec.window.hi[0]; ++i)
            for (int t = spec.window.lo[1]; t <= spec.window.hi[1]; ++t) {
                const Site x(i, t);
                const spin_t cur = c.at(x);
                const std::uint64_t draw = rng.next_below(static_cast<std::uint64_t>(spin - 1));
                const spin_t prop =
                    static_cast<spin_t>(draw < cur ? draw : draw + 1);
                const double dh = delta_energy(c, m, x, prop, spec.wrap_vertical);
                const double u = rng.next_double();
                ++attempted;
                if (u < std::exp(-beta * dh)) {
                    c.set(x, prop);
                    ++accepted;
                }
            }
        if (sweep > spec.thermalization && (sweep - spec.thermalization) % spec.stride == 0) {
            Measurement meas;
            meas.sweep = sweep;
            meas.fractions = order_parameters(c, m);
            meas.energy_per_site = bulk_energy_density(c, m, m.rbar + 1, spec.wrap_vertical);
            meas.acceptance =
                attempted > 0 ? static_cast<double>(accepted) / static_cast<double>(attempted)
                              : 0.0;
            energies.push_back(meas.energy_per_site);
            meas.autocorrelation = lag1_autocorrelation(energies);
            series.push_back(std::move(meas));
            attempted = accepted = 0;
        }
    }
    if (final_state) *final_state = std::move(c);
    return series;
}

ScanResult coexistence_scan(const HamiltonianFamily& fam, const ScanSpec& spec) {
    if (spec.lambdas.empty()) throw std::invalid_argument("empty lambda grid");
    if (spec.reps < 1) throw std::invalid_argument("need at least one repetition");
    const int threads = std::max(1, spec.threads);

    std::vector<LaminatedModel> models;
    models.reserve(spec.lambdas.size());
    for (double lam : spec.lambdas)
        models.push_back(build_laminated(fam, lam, spec.l, spec.rbar, spec.beta));
    const int r = models.front().ground_count();

    struct Job {
        size_t li;
        int q;
        int rep;
    };
    std::vector<Job> jobs;
    for (size_t li = 0; li < spec.lambdas.size(); ++li)
        for (int q = 0; q < r; ++q)
            for (int rep = 0; rep < spec.reps; ++rep) jobs.push_back({li, q, rep});

    ScanResult result;
    result.cells.resize(jobs.size());

    auto run_job = [&](size_t j) {
        const Job& job = jobs[j];
        ScanCell cell;
        cell.lambda = spec.lambdas[job.li];
        cell.boundary_q = job.q;
        cell.rep = job.rep;
        cell.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(j));
        ChainSpec cs;
        cs.window = spec.window;
        cs.boundary_q = job.q;
        cs.beta = spec.beta;
        cs.sweeps = spec.sweeps;
        cs.thermalization = spec.thermalization;
        cs.stride = spec.stride;
        cs.seed = cell.seed;
        cell.series = run_chain(cs, models[job.li]);
        const auto& series = cell.series;
        if (series.empty()) throw std::runtime_error("chain produced no measurements");
        cell.mean_fractions.assign(r, 0.0);
        kahan_sum esum, asum;
        for (const auto& meas : series) {
            for (int q = 0; q < r; ++q) cell.mean_fractions[q] += meas.fractions[q];
            esum.add(meas.energy_per_site);
            asum.add(meas.acceptance);
        }
        for (double& f : cell.mean_fractions) f /= static_cast<double>(series.size());
        cell.mean_energy = esum.value() / static_cast<double>(series.size());
        cell.acceptance = asum.value() / static_cast<double>(series.size());
        result.cells[j] = std::move(cell);
    };

    if (threads == 1) {
        for (size_t j = 0; j < jobs.size(); ++j) run_job(j);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t]() {
                try {
                    for (size_t j = static_cast<size_t>(t); j < jobs.size();
                         j += static_cast<size_t>(threads))
                        run_job(j);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    // per-lambda aggregation; sample stderr over repetitions
    for (size_t li = 0; li < spec.lambdas.size(); ++li) {
        ScanRow row;
        row.lambda = spec.lambdas[li];
        row.own.assign(r, 0.0);
        row.own_err.assign(r, 0.0);
        row.other.assign(r, 0.0);
        row.other_err.assign(r, 0.0);
        for (int q = 0; q < r; ++q) {
            std::vector<double> own_vals, other_vals;
            const size_t base = li * static_cast<size_t>(r) * spec.reps;
            for (size_t j = base; j < base + static_cast<size_t>(r) * spec.reps; ++j) {
                const ScanCell& cell = result.cells[j];
                if (cell.boundary_q == q)
                    own_vals.push_back(cell.mean_fractions[q]);
                else
                    other_vals.push_back(cell.mean_fractions[q]);
            }
            auto mean_err = [](const std::vector<double>& v) {
                const double n = static_cast<double>(v.size());
                double mean = 0.0;
                for (double x : v) mean += x;
                mean /= n;
                double var = 0.0;
                for (double x : v) var += (x - mean) * (x - mean);
                const double err = v.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
                return std::pair<double, double>(mean, err);
            };
            std::tie(row.own[q], row.own_err[q]) = mean_err(own_vals);
            if (!other_vals.empty())
                std::tie(row.other[q], row.other_err[q]) = mean_err(other_vals);
        }
        kahan_sum dep, dep_var;
        for (int q = 0; q < r; ++q) {
            dep.add(row.own[q] - row.other[q]);
            dep_var.add(row.own_err[q] * row.own_err[q] + row.other_err[q] * row.other_err[q]);
        }
        row.dependence = dep.value() / static_cast<double>(r);
        row.dependence_err = std::sqrt(dep_var.value()) / static_cast<double>(r);
        result.rows.push_back(std::move(row));
    }
    result.threshold_lambda = -1.0;
    for (const auto& row : result.rows)
        if (row.dependence > 0.5) {
            result.threshold_lambda = row.lambda;
            break;
        }
    return result;
}

}  // namespace lamlab
