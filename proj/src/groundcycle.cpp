#include "lamlab/groundcycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lamlab {

namespace {

constexpr int kMaxVertices = 1024;
// Solver accepts weights up to 2^55 so that excitation sentinels fit; model numerators are
// capped tighter at coarse-graining time. All sums then stay inside __int128 comfortably.
constexpr long long kMaxWeightNum = 1LL << 55;
constexpr size_t kMaxCycles = 10000;
constexpr long long kDfsBudget = 20000000;

// ---- cycle enumeration on an explicit adjacency structure ------------------------------

struct CycleCollector {
    const std::vector<std::vector<int>>& adj;  // adj[v] = sorted successors
    std::vector<std::vector<int>> out;
    std::vector<char> on_path;
    std::vector<int> path;
    long long budget = kDfsBudget;
    size_t max_cycles = kMaxCycles;
    int start = 0;

    explicit CycleCollector(const std::vector<std::vector<int>>& a)
        : adj(a), on_path(a.size(), 0) {}

    void dfs(int v) {
        if (--budget < 0) throw capacity_error("cycle enumeration budget exhausted");
        for (int y : adj[v]) {
            if (y == start) {
                out.push_back(path);
                if (out.size() > max_cycles) throw capacity_error("too many cycles");
            } else if (y > start && !on_path[y]) {
                on_path[y] = 1;
                path.push_back(y);
                dfs(y);
                path.pop_back();
                on_path[y] = 0;
            }
        }
    }

    void run() {
        const int n = static_cast<int>(adj.size());
        for (start = 0; start < n; ++start) {
            path.assign(1, start);
            on_path.assign(n, 0);
            on_path[start] = 1;
            dfs(start);
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
    }
};

void check_vertex_count(int n, size_t wsize) {
    if (n < 1) throw std::invalid_argument("need at least one vertex");
    if (n > kMaxVertices) throw capacity_error("cycle solver supports at most 1024 vertices");
    if (wsize != static_cast<size_t>(n) * n) throw std::invalid_argument("weight matrix size");
}

// ---- float solver -----------------------------------------------------------------------

// Karp table F[k][v] = minimum weight of a k-edge walk ending at v, all starts allowed.
template <typename T, typename W>
std::vector<T> karp_table(int n, const W& w) {
    std::vector<T> F(static_cast<size_t>(n + 1) * n);
    for (int k = 1; k <= n; ++k) {
        const T* prev = &F[static_cast<size_t>(k - 1) * n];
        T* cur = &F[static_cast<size_t>(k) * n];
        for (int y = 0; y < n; ++y) {
            T best = prev[0] + w(0, y);
            for (int x = 1; x < n; ++x) {
                const T cand = prev[x] + w(x, y);
                if (cand < best) best = cand;
            }
            cur[y] = best;
        }
    }
    return F;
}

}  // namespace

CycleSolution minimum_mean_cycles(int n, const std::vector<double>& w, double rel_tol) {
    check_vertex_count(n, w.size());
    double maxabs = 0.0;
    for (double v : w) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite weight");
        maxabs = std::max(maxabs, std::abs(v));
    }
    const double tol = rel_tol * std::max(1.0, maxabs);
    auto weight = [&](int x, int y) { return w[static_cast<size_t>(x) * n + y]; };

    const auto F = karp_table<double>(n, weight);
    double mu = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, (F[static_cast<size_t>(n) * n + v] -
                                     F[static_cast<size_t>(k) * n + v]) /
                                        (n - k));
        mu = std::min(mu, worst);
    }

    // Reduced weights have no cycle below -tol; n relaxation rounds reach the fixpoint.
    std::vector<double> p(n, 0.0);
    for (int round = 0; round < n; ++round)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                p[y] = std::min(p[y], p[x] + weight(x, y) - mu);

    std::vector<std::vector<int>> adj(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (p[x] + weight(x, y) - mu - p[y] <= 2 * tol) adj[x].push_back(y);

    CycleCollector col(adj);
    col.run();

    CycleSolution sol;
    sol.min_mean = mu;
    for (auto& verts : col.out) {
        kahan_sum s;
        for (size_t i = 0; i < verts.size(); ++i)
            s.add(weight(verts[i], verts[(i + 1) % verts.size()]));
        const double mean = s.value() / static_cast<double>(verts.size());
        if (mean <= mu + tol) {
            Cycle c;
            c.vertices = std::move(verts);
            c.mean = mean;
            sol.cycles.push_back(std::move(c));
        }
    }
    if (sol.cycles.empty()) throw std::runtime_error("internal: no optimal cycle recovered");
    return sol;
}

CycleSolution minimum_mean_cycles_exact(int n, const std::vector<long long>& w, long long denom) {
    check_vertex_count(n, w.size());
    if (denom <= 0) throw std::invalid_argument("denominator must be positive");
    for (long long v : w)
        if (std::llabs(v) > kMaxWeightNum) throw capacity_error("exact weight too large");
    auto weight = [&](int x, int y) { return w[static_cast<size_t>(x) * n + y]; };

    using i128 = __int128;
    const auto F = karp_table<i128>(n, weight);

    // mu = min over v of max over k of (F[n][v]-F[k][v])/(n-k), tracked as a fraction.
    long long mu_num = 0, mu_den = 1;
    bool have = false;
    auto less = [](i128 an, long long ad, i128 bn, long long bd) {
        return an * bd < bn * ad;  // denominators positive
    };
    for (int v = 0; v < n; ++v) {
        i128 bn = 0;
        long long bd = 1;
        bool vhave = false;
        for (int k = 0; k < n; ++k) {
            const i128 num = F[static_cast<size_t>(n) * n + v] - F[static_cast<size_t>(k) * n + v];
            const long long den = n - k;
            if (!vhave || less(bn, bd, num, den)) {
                bn = num;
                bd = den;
                vhave = true;
            }
        }
        if (!have || less(bn, bd, mu_num, mu_den)) {
            if (bn > i128(1) << 62 || bn < -(i128(1) << 62))
                throw capacity_error("mean cycle value out of range");
            mu_num = static_cast<long long>(bn);
            mu_den = bd;
            have = true;
        }
    }
    const long long g = gcd_ll(std::llabs(mu_num), mu_den);
    if (g > 1) {
        mu_num /= g;
        mu_den /= g;
    }

    // Scale by mu_den so reduced weights are integers; cycles of mean mu reduce to sum 0.
    auto reduced = [&](int x, int y) -> i128 {
        return static_cast<i128>(mu_den) * weight(x, y) - mu_num;
    };
    std::vector<i128> p(n, 0);
    for (int round = 0; round < n; ++round)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                const i128 cand = p[x] + reduced(x, y);
                if (cand < p[y]) p[y] = cand;
            }
    for (int x = 0; x < n; ++x)  // one certifying round: no improvement may remain
        for (int y = 0; y < n; ++y)
            if (p[x] + reduced(x, y) < p[y])
                throw std::runtime_error("internal: negative reduced cycle");

    std::vector<std::vector<int>> adj(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (p[x] + reduced(x, y) == p[y]) adj[x].push_back(y);

    CycleCollector col(adj);
    col.run();

    CycleSolution sol;
    sol.exact = true;
    sol.min_mean_exact = fraction(mu_num, mu_den * denom);
    sol.min_mean = sol.min_mean_exact.value();
    for (auto& verts : col.out) {
        i128 total = 0;
        for (size_t i = 0; i < verts.size(); ++i)
            total += weight(verts[i], verts[(i + 1) % verts.size()]);
        const i128 scaled = static_cast<i128>(mu_den) * total -
                            static_cast<i128>(mu_num) * static_cast<i128>(verts.size());
        if (scaled != 0) continue;  // tight subgraph admits only optimal cycles; be safe
        if (total > i128(1) << 62 || total < -(i128(1) << 62))
            throw capacity_error("cycle total out of range");
        Cycle c;
        c.vertices = std::move(verts);
        c.mean_exact =
            fraction(static_cast<long long>(total),
                     static_cast<long long>(c.vertices.size()) * denom);
        c.mean = c.mean_exact.value();
        sol.cycles.push_back(std::move(c));
    }
    if (sol.cycles.empty()) throw std::runtime_error("internal: no optimal cycle recovered");
    return sol;
}

std::vector<std::vector<int>> all_elementary_cycles(int n) {
    if (n < 1 || n > 8) throw capacity_error("exhaustive enumeration supports at most 8 vertices");
    std::vector<std::vector<int>> adj(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) adj[x].push_back(y);
    CycleCollector col(adj);
    col.max_cycles = 100000;
    col.run();
    return std::move(col.out);
}

long long boundary_site_count(const std::vector<long long>& words,
                              const std::vector<long long>& ground_words, long long exterior) {
    auto is_ground = [&](long long v) {
        return std::find(ground_words.begin(), ground_words.end(), v) != ground_words.end();
    };
    const long long n = static_cast<long long>(words.size());
    auto at = [&](long long i) { return (i < 0 || i >= n) ? exterior : words[i]; };
    long long count = 0;
    for (long long i = -1; i <= n; ++i) {
        const long long a = at(i - 1), b = at(i), c = at(i + 1);
        if (!(a == b && b == c && is_ground(b))) ++count;
    }
    return count;
}

namespace {

std::vector<long long> self_loop_words(const std::vector<Cycle>& cycles) {
    std::vector<long long> q;
    for (const auto& c : cycles)
        if (c.vertices.size() == 1) q.push_back(c.vertices[0]);
    std::sort(q.begin(), q.end());
    return q;
}

}  // namespace

double peierls_constant(const BlockModel& m, const std::vector<long long>& ground_words,
                        double mu_star, double rel_tol) {
    if (ground_words.empty()) throw std::invalid_argument("empty ground set");
    const int n = static_cast<int>(m.blocks);
    if (n == 1) return std::numeric_limits<double>::infinity();
    std::vector<double> w(static_cast<size_t>(n) * n);
    double maxabs = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            w[static_cast<size_t>(x) * n + y] = m.phibar2(x, y);
            maxabs = std::max(maxabs, std::abs(w[static_cast<size_t>(x) * n + y]));
        }
    const double big = 4.0 * (maxabs + std::abs(mu_star) + 1.0) * (n + 1);
    for (long long q : ground_words) w[static_cast<size_t>(q) * n + q] = big;
    const CycleSolution sol = minimum_mean_cycles(n, w, rel_tol);
    return (sol.min_mean - mu_star) / 2.0;
}

fraction peierls_constant_exact(const BlockModel& m, const std::vector<long long>& ground_words,
                                const fraction& mu_star) {
    if (!m.exact()) throw std::invalid_argument("model is not exact");
    if (ground_words.empty()) throw std::invalid_argument("empty ground set");
    const int n = static_cast<int>(m.blocks);
    if (n == 1) throw std::invalid_argument("no excitation cycles in a one-word model");
    std::vector<long long> w(static_cast<size_t>(n) * n);
    long long maxabs = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            w[static_cast<size_t>(x) * n + y] = m.phibar2_num(x, y);
            maxabs = std::max(maxabs, std::llabs(w[static_cast<size_t>(x) * n + y]));
        }
    const long long big = (maxabs + 1) * (n + 1) * 2;
    for (long long q : ground_words) w[static_cast<size_t>(q) * n + q] = big;
    const CycleSolution sol = minimum_mean_cycles_exact(n, w, m.source.denom);
    // (mu2 - mu*) / 2, all exact
    const fraction mu2 = sol.min_mean_exact;
    const __int128 num =
        static_cast<__int128>(mu2.num) * mu_star.den - static_cast<__int128>(mu_star.num) * mu2.den;
    const __int128 den = static_cast<__int128>(2) * mu2.den * mu_star.den;
    if (num > (__int128(1) << 62) || num < -(__int128(1) << 62) || den > (__int128(1) << 62))
        throw capacity_error("excitation constant out of range");
    return fraction(static_cast<long long>(num), static_cast<long long>(den));
}

GroundReport ground_states(const Hamiltonian& h, int block_size, double rel_tol) {
    Hamiltonian src = h;
    src.finalize();
    int N = block_size;
    if (N == 0) {
        N = src.period;
        while (N < std::max(src.range(), 1)) N += src.period;
    }

    GroundReport rep;
    rep.exact = src.denom > 0;

    CycleSolution sol;
    for (int round = 0;; ++round) {
        rep.model = coarse_grain(src, N);
        const int n = static_cast<int>(rep.model.blocks);
        if (rep.exact) {
            std::vector<long long> w(static_cast<size_t>(n) * n);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    w[static_cast<size_t>(x) * n + y] = rep.model.phibar2_num(x, y);
            sol = minimum_mean_cycles_exact(n, w, src.denom);
        } else {
            std::vector<double> w(static_cast<size_t>(n) * n);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    w[static_cast<size_t>(x) * n + y] = rep.model.phibar2(x, y);
            sol = minimum_mean_cycles(n, w, rel_tol);
        }
        rep.rounds.push_back({N, sol.min_mean, sol.cycles});

        long long L = 1;
        for (const auto& c : sol.cycles) {
            L = lcm_ll(L, static_cast<long long>(c.vertices.size()));
            if (L > 4096) throw capacity_error("ground period exceeds the block capacity");
        }
        if (L == 1) break;
        if (round >= 3)
            throw capacity_error("ground cycle structure did not stabilize under re-blocking");
        // any alphabet has at least two values, so block words longer than 12 sites
        // necessarily exceed the 4096-value block space
        if (L * N > 12) throw capacity_error("ground period exceeds the block capacity");
        N = static_cast<int>(L) * N;
    }

    rep.ground_words = self_loop_words(sol.cycles);
    for (long long q : rep.ground_words)
        rep.ground_patterns.push_back(rep.model.block_pattern(q));
    rep.min_mean = sol.min_mean;
    const int Nf = rep.model.block_size;
    rep.shift = sol.min_mean / Nf;
    if (rep.exact)
        rep.shift_exact = fraction(sol.min_mean_exact.num, sol.min_mean_exact.den * Nf);

    if (rep.model.blocks == 1) {
        rep.peierls_finite = false;
        rep.peierls_c = std::numeric_limits<double>::infinity();
    } else if (rep.exact) {
        rep.peierls_exact =
            peierls_constant_exact(rep.model, rep.ground_words, sol.min_mean_exact);
        rep.peierls_c = rep.peierls_exact.value();
    } else {
        rep.peierls_c = peierls_constant(rep.model, rep.ground_words, sol.min_mean, rel_tol);
    }
    return rep;
}

}  // namespace lamlab
