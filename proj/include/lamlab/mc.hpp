#pragma once

#include <vector>

#include "lamlab/laminate.hpp"

namespace lamlab {

struct ChainSpec {
    Window window;
    int boundary_q = 0;
    double beta = 1.0;
    long long sweeps = 0;
    long long thermalization = 0;
    long long stride = 1;  // sweeps between measurements
    unsigned long long seed = 0;
    // join the top and bottom window rows into a cylinder; the frame then fixes only the
    // horizontal ends.  Matches the strip transfer operator's vertical wrap, so strip chains
    // are comparable with transfer_free_energy.  Needs at least two rows.
    bool wrap_vertical = false;
};

struct Measurement {
    long long sweep = 0;
    std::vector<double> fractions;  // per-ground regular-column fraction
    double energy_per_site = 0.0;   // bulk density over the core (window shrunk by rbar+1)
    double acceptance = 0.0;        // acceptance rate since the previous measurement
    double autocorrelation = 0.0;   // lag-1 autocorrelation of the energy series so far
};

// energy change of setting site x to value v, local terms only; matches the relative
// energy of the flipped configuration against the current one.  With wrap_vertical the
// vertical neighbours are taken around the window cylinder instead of from the frame.
double delta_energy(const Configuration& c, const LaminatedModel& m, const Site& x, spin_t v,
                    bool wrap_vertical = false);

// per-ground fraction of regular columns in the window
std::vector<double> order_parameters(const Configuration& s, const LaminatedModel& m);

// bulk energy density: per-site horizontal anchors plus upward vertical bonds, averaged
// over the window shrunk by `margin` sites on every side (margin clamped so the core
// stays nonempty).  With wrap_vertical the top row's upward bond closes the cylinder.
double bulk_energy_density(const Configuration& c, const LaminatedModel& m, int margin,
                           bool wrap_vertical = false);

// Sequential-sweep single-site Metropolis chain with fixed lifted-ground boundary
// (cylindrical in the vertical direction when the spec asks for it); lexicographic update
// order, uniform proposals over the other spin values, counter-based splitmix64
// randomness. Deterministic for a given spec.
std::vector<Measurement> run_chain(const ChainSpec& spec, const LaminatedModel& m,
                                   Configuration* final_state = nullptr);

struct ScanSpec {
    std::vector<double> lambdas;
    Window window;
    double beta = 1.0;
    int l = 1;
    int rbar = 2;
    int reps = 2;
    long long sweeps = 400;
    long long thermalization = 200;
    long long stride = 20;
    unsigned long long seed = 1;
    int threads = 1;
};

struct ScanCell {
    double lambda = 0.0;
    int boundary_q = 0;
    int rep = 0;
    unsigned long long seed = 0;
    std::vector<Measurement> series;     // per sweep-block
    std::vector<double> mean_fractions;  // time average per ground
    double mean_energy = 0.0;
    double acceptance = 0.0;
};

struct ScanRow {
    double lambda = 0.0;
    std::vector<double> own;          // mean fraction of q under boundary q
    std::vector<double> own_err;      // standard error over reps
    std::vector<double> other;        // mean fraction of q under the other boundaries
    std::vector<double> other_err;
    double dependence = 0.0;          // average over q of own - other
    double dependence_err = 0.0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::vector<ScanCell> cells;      // per (lambda, boundary, rep), merge order fixed
    double threshold_lambda = -1.0;   // first grid point with dependence > 0.5, -1 if none
};

// Chains for every (lambda, boundary label, repetition) cell, run on `threads` workers,
// merged deterministically.
ScanResult coexistence_scan(const HamiltonianFamily& fam, const ScanSpec& spec);

}  // namespace lamlab
