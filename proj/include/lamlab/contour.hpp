#pragma once

#include <map>
#include <vector>

#include "lamlab/laminate.hpp"

namespace lamlab {

// Vertical slab of l sites: (i, t) with k*l <= t < (k+1)*l.
struct Column {
    int i = 0;
    int k = 0;

    bool operator==(const Column& o) const { return i == o.i && k == o.k; }
    bool operator<(const Column& o) const { return i != o.i ? i < o.i : k < o.k; }
};

// Chebyshev distance between the site sets of two columns of height l.
int column_distance(const Column& a, const Column& b, int l);

enum class ColumnKind { regular, frustrated, defective, faced };

struct ColumnLabel {
    ColumnKind kind = ColumnKind::regular;
    int q = -1;   // regular/faced: own ground label
    int q2 = -1;  // faced: label of the differing vertical neighbour
};

// Axis-aligned rectangle of columns, inclusive bounds.
struct ColumnBox {
    int i_lo = 0, i_hi = -1;
    int k_lo = 0, k_hi = -1;

    long long columns() const {
        if (i_hi < i_lo || k_hi < k_lo) return 0;
        return static_cast<long long>(i_hi - i_lo + 1) * (k_hi - k_lo + 1);
    }
    bool contains(const Column& c) const {
        return c.i >= i_lo && c.i <= i_hi && c.k >= k_lo && c.k <= k_hi;
    }
    // Chebyshev diameter of the site set (height in sites is rows * l).
    int site_diameter(int l) const;
    // window of all sites covered by the box
    Window window(int l) const;
};

struct Contour {
    std::vector<Column> support;       // sorted
    std::vector<spin_t> local_config;  // per support column, its l spins bottom to top
    int exterior_q = 0;
    std::map<int, std::vector<Column>> interiors;  // ground label -> columns
    long long n_b = 0;  // faced columns
    long long n_c = 0;  // frustrated columns
    long long n_d = 0;  // defective columns
    int diameter = 0;   // site-level Chebyshev diameter of the support
    bool external = true;

    long long norm() const { return static_cast<long long>(support.size()); }
    long long volume(int m) const;  // columns of the m-interior
    long long volume_total() const;
};

// Label of one column of the configuration (columns outside the window resolve through the
// boundary rule). A column is frustrated when any column within horizontal distance rbar on
// the same row is non-constant; regular(q) when that whole strip reproduces ground q;
// defective when the strip is columnwise constant but matches no ground; a regular column
// becomes faced when a vertically adjacent column is regular with a different label.
ColumnLabel classify_column(const Configuration& s, const LaminatedModel& m, const Column& c);

// Labels for every column of the window; the window must be aligned to the column grid.
std::map<Column, ColumnLabel> classify_columns(const Configuration& s, const LaminatedModel& m);

// Connected components of the non-regular columns, with interiors, labels and counts.
// Requires the boundary region to stay at distance > 1 from the window frame.
std::vector<Contour> extract_contours(const Configuration& s, const LaminatedModel& m);

// Ground-q configuration on the window with the contour's interiors reset to their ground
// labels and the support overwritten by the contour's local configuration.
Configuration standard_config(const Contour& g, const LaminatedModel& m, const Window& w);
// Convenience: a window holding the contour with `margin_cols` ground columns around it.
Window contour_window(const Contour& g, const LaminatedModel& m, int margin_cols);

struct PsiReport {
    double h_rel = 0.0;        // relative energy of the standard configuration vs ground q
    double correction = 0.0;   // sum over m of (h~_m - h~_q) V_m
    double psi = 0.0;          // h_rel - correction
    double psi_v = 0.0;        // vertical bond part
    double psi_g = 0.0;        // psi - psi_v
    int t_lo = 0;              // first layer of psi_g_layers
    std::vector<double> psi_g_layers;  // per-layer horizontal part net of the correction
};

PsiReport psi_decompose(const Contour& g, const LaminatedModel& m);

struct BoundAudit {
    PsiReport psi;
    long long n_b = 0, n_c = 0, n_d = 0, norm = 0;
    long long variable_columns = 0;   // non-constant support columns
    long long differing_interfaces = 0;  // vertically adjacent support pairs with a spin
                                         // mismatch across the shared face
    double rho = 0.0, u = 0.0, v = 0.0;
    // per-layer horizontal bound: psi_g^t >= rho * (defective columns crossing layer t)
    double layer_min_slack = 0.0;
    bool layer_pass = false;
    // aggregated horizontal bound: psi_g >= rho l N_d
    double horizontal_slack = 0.0;
    bool horizontal_pass = false;
    // vertical bound as displayed: psi_v >= lambda (N_b + N_c); this one can fail because
    // frustration-halo columns carry no vertical energy of their own
    double vertical_slack = 0.0;
    bool vertical_pass = false;
    // provable vertical bound: psi_v >= lambda (variable columns + differing interfaces)
    double vertical_sound_slack = 0.0;
    bool vertical_sound_pass = false;
    // combined bound: beta psi >= beta rho l N_d + beta lambda (N_b + N_c)
    double combined_slack = 0.0;
    bool combined_pass = false;
    // decay bound: beta psi >= (u+1) ||G|| + v l N_c
    double decay_lhs = 0.0, decay_rhs = 0.0, decay_slack = 0.0;
    bool decay_pass = false;
};

BoundAudit audit_bounds(const Contour& g, const LaminatedModel& m, double rho, double u,
                        double v);

// All contours with connected support of at most max_columns columns whose support keeps
// distance > 1 from the complement of the box, validated by extraction round-trip. Capacity
// errors if the box exceeds 8x8 columns, has more than 20 admissible support cells, or
// per-column enumeration would exceed 256 states.
std::vector<Contour> enumerate_contours(const ColumnBox& box, int q, int max_columns,
                                        const LaminatedModel& m);

struct CollectionBound {
    double lhs = 0.0;  // sum over contours of (norm + interior volume) * c^diameter
    double rhs = 0.0;  // c^{diameter(V)} / (c-1) * columns(V)
    bool pass = false;
};

// Validates that the supports are pairwise distant and distant from the box complement,
// then evaluates the geometric weight inequality.
CollectionBound collection_weight_bound(const std::vector<Contour>& collection,
                                        const ColumnBox& box, int l, double c);

// Geometric contour for collection audits: support plus optional interior columns; no
// configuration attached.
Contour make_geometric_contour(std::vector<Column> support, int l,
                               std::map<int, std::vector<Column>> interiors = {});

}  // namespace lamlab
