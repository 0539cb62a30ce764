#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lamlab/util.hpp"

namespace lamlab {

using spin_t = std::uint8_t;

// Lattice site in dimension 1..3; unused coordinates stay 0.
struct Site {
    int dim = 1;
    std::array<int, 3> c{0, 0, 0};

    Site() = default;
    Site(int x) : dim(1), c{x, 0, 0} {}
    Site(int x, int y) : dim(2), c{x, y, 0} {}
    Site(int x, int y, int z) : dim(3), c{x, y, z} {}

    bool operator==(const Site& o) const { return dim == o.dim && c == o.c; }
    bool operator<(const Site& o) const { return c < o.c; }  // lexicographic
};

// Chebyshev distance, the metric every "distant"/"connected" notion in this library uses.
int distance(const Site& a, const Site& b);

// Minimum pairwise distance between two finite site sets.
int set_distance(const std::vector<Site>& a, const std::vector<Site>& b);

enum class BoundaryMode { fixed, periodic };

// Axis-aligned box of sites, inclusive bounds.
struct Window {
    int dim = 1;
    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> hi{0, 0, 0};

    Window() = default;
    Window(int lo0, int hi0);
    Window(int lo0, int hi0, int lo1, int hi1);

    int extent(int axis) const { return hi[axis] - lo[axis] + 1; }
    long long volume() const;
    bool contains(const Site& s) const;
    std::size_t flat_index(const Site& s) const;  // lexicographic, axis 0 most significant
    Site site_at(std::size_t flat) const;
    void validate() const;  // lo <= hi on every axis

    bool operator==(const Window& o) const { return dim == o.dim && lo == o.lo && hi == o.hi; }
};

// A spin configuration on a window. Outside the window, `fixed` mode returns the exterior
// pattern (periodic along axis 0, constant along the others — the shape of a lifted
// one-dimensional ground state), and `periodic` mode wraps every axis.
struct Configuration {
    Window window;
    BoundaryMode boundary = BoundaryMode::fixed;
    std::vector<spin_t> spins;          // window.volume() entries, flat order
    std::vector<spin_t> exterior;       // fixed mode: value at site = exterior[mod(c0, size)]
    int exterior_label = -1;            // optional ground-state index, for reporting only

    static Configuration constant(const Window& w, spin_t value, std::vector<spin_t> ext);

    spin_t at(const Site& s) const;
    void set(const Site& s, spin_t v);
    void validate() const;
    bool same_frame(const Configuration& o) const;  // same window, boundary and exterior
};

// Connected components under Chebyshev adjacency (distance <= 1). Components are sorted
// internally and ordered by their lexicographically minimal site.
std::vector<std::vector<Site>> connected_components(std::vector<Site> sites);

}  // namespace lamlab
