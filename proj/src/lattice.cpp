#include "lamlab/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>

namespace lamlab {

int distance(const Site& a, const Site& b) {
    if (a.dim != b.dim) throw std::invalid_argument("distance: dimension mismatch");
    int d = 0;
    for (int k = 0; k < a.dim; k++) d = std::max(d, std::abs(a.c[k] - b.c[k]));
    return d;
}

int set_distance(const std::vector<Site>& a, const std::vector<Site>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("set_distance: empty set");
    int best = std::numeric_limits<int>::max();
    for (const auto& x : a)
        for (const auto& y : b) best = std::min(best, distance(x, y));
    return best;
}

Window::Window(int lo0, int hi0) : dim(1), lo{lo0, 0, 0}, hi{hi0, 0, 0} { validate(); }

Window::Window(int lo0, int hi0, int lo1, int hi1) : dim(2), lo{lo0, lo1, 0}, hi{hi0, hi1, 0} {
    validate();
}

void Window::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("window: dimension must be 1..3");
    for (int k = 0; k < dim; k++)
        if (lo[k] > hi[k]) throw std::invalid_argument("window: lo > hi");
}

long long Window::volume() const {
    long long v = 1;
    for (int k = 0; k < dim; k++) v *= extent(k);
    return v;
}

bool Window::contains(const Site& s) const {
    if (s.dim != dim) throw std::invalid_argument("window: site dimension mismatch");
    for (int k = 0; k < dim; k++)
        if (s.c[k] < lo[k] || s.c[k] > hi[k]) return false;
    return true;
}

std::size_t Window::flat_index(const Site& s) const {
    std::size_t idx = 0;
    for (int k = 0; k < dim; k++) idx = idx * extent(k) + static_cast<std::size_t>(s.c[k] - lo[k]);
    return idx;
}

Site Window::site_at(std::size_t flat) const {
    Site s;
    s.dim = dim;
    for (int k = dim - 1; k >= 0; k--) {
        int e = extent(k);
        s.c[k] = lo[k] + static_cast<int>(flat % e);
        flat /= e;
    }
    return s;
}

Configuration Configuration::constant(const Window& w, spin_t value, std::vector<spin_t> ext) {
    Configuration c;
    c.window = w;
    c.spins.assign(static_cast<std::size_t>(w.volume()), value);
    c.exterior = std::move(ext);
    c.validate();
    return c;
}

spin_t Configuration::at(const Site& s) const {
    if (window.contains(s)) return spins[window.flat_index(s)];
    if (boundary == BoundaryMode::periodic) {
        Site w = s;
        for (int k = 0; k < window.dim; k++)
            w.c[k] = window.lo[k] + mod(s.c[k] - window.lo[k], window.extent(k));
        return spins[window.flat_index(w)];
    }
    if (exterior.empty())
        throw std::invalid_argument("configuration: fixed boundary without exterior pattern");
    return exterior[static_cast<std::size_t>(mod(s.c[0], static_cast<int>(exterior.size())))];
}

void Configuration::set(const Site& s, spin_t v) {
    if (!window.contains(s)) throw std::invalid_argument("configuration: set outside window");
    spins[window.flat_index(s)] = v;
}

void Configuration::validate() const {
    window.validate();
    if (spins.size() != static_cast<std::size_t>(window.volume()))
        throw std::invalid_argument("configuration: spin count does not match window volume");
    if (boundary == BoundaryMode::fixed && exterior.empty())
        throw std::invalid_argument("configuration: fixed boundary needs an exterior pattern");
}

bool Configuration::same_frame(const Configuration& o) const {
    return window == o.window && boundary == o.boundary && exterior == o.exterior;
}

std::vector<std::vector<Site>> connected_components(std::vector<Site> sites) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    if (sites.empty()) return {};
    int dim = sites.front().dim;
    std::map<std::array<int, 3>, std::size_t> index;
    for (std::size_t i = 0; i < sites.size(); i++) {
        if (sites[i].dim != dim)
            throw std::invalid_argument("connected_components: mixed dimensions");
        index[sites[i].c] = i;
    }
    std::vector<int> comp(sites.size(), -1);
    int ncomp = 0;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < sites.size(); i++) {
        if (comp[i] >= 0) continue;
        comp[i] = ncomp;
        stack.assign(1, i);
        while (!stack.empty()) {
            Site s = sites[stack.back()];
            stack.pop_back();
            // enumerate the Chebyshev 1-neighbourhood
            std::array<int, 3> off{-1, -1, -1};
            int hi1 = dim > 1 ? 1 : 0, hi2 = dim > 2 ? 1 : 0;
            for (off[0] = -1; off[0] <= 1; off[0]++)
                for (off[1] = dim > 1 ? -1 : 0; off[1] <= hi1; off[1]++)
                    for (off[2] = dim > 2 ? -1 : 0; off[2] <= hi2; off[2]++) {
                        std::array<int, 3> n{s.c[0] + off[0], s.c[1] + off[1], s.c[2] + off[2]};
                        auto it = index.find(n);
                        if (it == index.end() || comp[it->second] >= 0) continue;
                        comp[it->second] = ncomp;
                        stack.push_back(it->second);
                    }
        }
        ncomp++;
    }
    std::vector<std::vector<Site>> out(static_cast<std::size_t>(ncomp));
    for (std::size_t i = 0; i < sites.size(); i++)
        out[static_cast<std::size_t>(comp[i])].push_back(sites[i]);
    // sites were scanned in sorted order, so each component is sorted and components are
    // already ordered by minimal site
    return out;
}

}  // namespace lamlab
