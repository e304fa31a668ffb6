#pragma once
// Path simulation and fluctuation records: exact-increment grid paths,
// first-passage sampling (event-driven and exact for compound Poisson,
// gap-adaptive stepping for Gaussian/stable parts), ladder extraction, ladder
// increment collection, and the empirical potential measure of the dual
// ladder height.

#include <cstdint>
#include <optional>
#include <vector>

#include "fluctlab/models.hpp"

namespace fluctlab {

struct Path {
    std::vector<double> times;       // nondecreasing; jump instants carry two vertices
    std::vector<double> values;
    std::vector<double> sup_values;  // running maximum of values
};

// exact-increment path: Gaussian/stable increments drawn exactly per grid
// step; compound Poisson by exact event times merged onto the reporting grid
Path sample_path(const ProcessFamily& f, double horizon, double dt, RngStream& rng);

struct PassageRecord {
    double r = 0.0;
    double T = 0.0;          // first time strictly above r
    double overshoot = 0.0;  // value_at(T) - r >= 0
    double undershoot = 0.0; // r - prior_sup in [0, r]
    double prior_sup = 0.0;  // supremum strictly before T
    bool discretized = false;
    double dt = 0.0;         // resolution parameter when discretized
};

// first passage above r, or nothing when t_cap is hit first (a legitimate
// outcome for processes drifting to -inf). Compound Poisson families are
// event-driven and exact. For Gaussian/stable families the step is
// gap-adaptive, dt * max(gap, r/1000)^a / scale with a the self-similarity
// index, so dt controls the spatial resolution near the boundary uniformly
// in r; records from that branch carry the discretization flag
std::optional<PassageRecord> first_passage(const ProcessFamily& f, double r, double dt,
                                           double t_cap, RngStream& rng);

struct LadderSample {
    std::vector<double> epochs;
    std::vector<double> heights;  // strictly increasing
};

// grid indices where the running supremum strictly increases; the origin is
// always the first ladder point
LadderSample extract_ladders(const Path& p);

struct LadderIncrements {
    std::vector<double> sizes;   // jump parts of supremum increases, pooled over paths
    long long paths = 0;
    double mean_per_path = 0.0;  // ladder jump count per path
    double horizon = 0.0;
};

// pooled ladder-height jump increments of a compound Poisson family by exact
// event-driven simulation; these are iid draws from po / |po|. burn_in skips
// leading records per path (grid-bias control; exact paths default to 0)
LadderIncrements ladder_increments(const CompoundPoissonDrift& f, double horizon,
                                   long long replicas, std::uint64_t seed,
                                   int burn_in = 0);

struct PotentialMeasure {
    bool closed_form = false;
    bool valid = true;        // false: dual supremum not continuous, histogram unusable
    double d_hat = 1.0;       // canonical normalization (unit-drift dual ladder)
    double kappa0 = 0.0;      // dual ladder killing rate (0 when unkilled)
    double atom0 = 0.0;       // point mass at 0 (dead-on-arrival dual ladder)
    std::vector<double> edges;    // histogram representation, edges from 0
    std::vector<double> masses;
    std::vector<double> stderrs;
    double total_mass = 0.0;      // 1/kappa0 when killed, +inf otherwise

    double mass_upto(double z) const;  // V-hat[0, z]
};

// potential measure of the dual ladder height. Closed form (density
// e^{-kappa0 y} dy) when the dual creeps upward and force_histogram is off;
// otherwise a covered-levels histogram: each replica contributes
// ((sup_T ^ b) - a)+ to bin [a, b), valid exactly when the dual supremum is
// continuous (spectrally positive compound Poisson with negative drift, or
// Brownian families)
PotentialMeasure potential_measure_dual(const ProcessFamily& f, double horizon, double dt,
                                        long long replicas, std::uint64_t seed,
                                        double y_max = 8.0, int bins = 64,
                                        bool force_histogram = false);

ProcessFamily dual_family(const ProcessFamily& f);

// log E e^{-lambda xi_1} for compound-Poisson-with-drift families
double laplace_exponent(const CompoundPoissonDrift& f, double lambda);

// E e^{-l J}: closed form when the law carries one, else 1 - l * Laplace
// transform of the tail plus atom terms
double jump_laplace(const JumpLaw& j, double l);

// positive root of the Laplace exponent of the dual, i.e. the dual ladder
// killing rate; zero when xi drifts to -inf
double dual_killing_rate(const CompoundPoissonDrift& f);

}  // namespace fluctlab
