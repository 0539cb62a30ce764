#pragma once

#include <vector>

#include "lamlab/contour.hpp"

namespace lamlab {

struct PartitionResult {
    double value = 1.0;
    double log_value = 0.0;
    long long terms = 0;
};

// Restricted volume partition function: sums exp(-beta H(s, s_q)) over all configurations
// that agree with the lifted ground q outside `volume`, whose non-regular columns keep
// distance > 1 from the complement of `volume`, and whose external-contour interiors stay
// inside `volume`. Enumeration capped at 24 sites.
PartitionResult xi_volume(const std::vector<Column>& volume, int q, const LaminatedModel& m);
PartitionResult xi_volume(const ColumnBox& box, int q, const LaminatedModel& m);

// Contour partition function: sums exp(-beta H(s, s_q)) over configurations whose unique
// external contour is g (interiors refilled freely, support and exterior fixed).
PartitionResult xi_contour(const Contour& g, const LaminatedModel& m);

struct FactorizationReport {
    PartitionResult direct;        // volume partition function by configuration scan
    double collection_sum = 1.0;   // sum over admissible external collections of the
                                   // product of contour partition functions
    long long pool_size = 0;       // candidate contours inside the volume
    long long collections = 0;     // admissible collections, empty one included
    double volume_residual = 0.0;  // relative gap between the two volume evaluations
    double contour_residual = 0.0;  // worst relative gap of the per-contour factorization
    double max_residual = 0.0;
};

// Dual evaluation of the two factorization identities: the volume partition function
// against the sum over collections of external contours (pairwise distant supports,
// distance > 1 from the box complement, interiors inside the box), and each candidate
// contour's partition function against exp(-beta H(contour)) times the product of its
// interior volume partition functions.
FactorizationReport verify_factorization(const ColumnBox& box, int q, const LaminatedModel& m);

// Log of the leading transfer eigenvalue per site for a strip of `width` vertically
// periodic rows; horizontal interactions must have range <= 1 and the column state space
// is capped at 4096. Power iteration to 1e-10.
double transfer_free_energy(const LaminatedModel& m, int width, double beta);

// Same strip with rows of the lifted ground q pinned directly above and below instead of
// the periodic wrap; matches the fixed frame the Metropolis sampler runs against, so its
// beta-derivative is comparable with sampled bulk energies.
double transfer_free_energy_pinned(const LaminatedModel& m, int width, double beta, int q);

}  // namespace lamlab
