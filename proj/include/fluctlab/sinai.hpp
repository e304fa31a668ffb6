#pragma once
// Monte Carlo evaluation of the occupation-type functional
// int dt/t P(z < xi_t <= lambda z) on a geometric t-window around the passage
// scale of z, plus the index estimate it induces and the stable oracle.

#include <cstdint>
#include <vector>

#include "fluctlab/models.hpp"
#include "fluctlab/regvar.hpp"

namespace fluctlab {

struct SinaiEstimate {
    double z = 0.0;
    double lambda = 1.0;
    double value = 0.0;
    double stderr_ = 0.0;
    double t_min = 0.0, t_max = 0.0;
    bool window_ok = true;  // boundary nodes contribute <= 1% of the estimate
};

// time at which the median of |xi_t| reaches z, by coarse Monte Carlo
// bisection; sets the scale of the integration window
double passage_time_scale(const ProcessFamily& f, double z, std::uint64_t seed,
                          long long probe_replicas = 400);

// geometric t-window around tau = passage_time_scale: [head_factor * tau,
// tail_factor * tau] with per_decade nodes per decade
std::vector<double> sinai_t_window(double tau, double head_factor = 1e-2,
                                   double tail_factor = 1e4, int per_decade = 8);

// trapezoid in log t over Monte Carlo estimates of P(z < xi_t <= lambda z);
// stderr from binomial variances through the same weights
SinaiEstimate sinai_functional(const ProcessFamily& f, double z, double lambda,
                               const std::vector<double>& t_grid, long long replicas,
                               std::uint64_t seed);

// alpha * rho * |log lambda|; the ratio below one flips the interval, not the
// sign of the functional
double stable_sinai_exact(double alpha, double rho, double lambda);

struct SinaiIndex {
    double beta = 0.0;
    double stderr_ = 0.0;
    bool stabilized = true;       // successive z estimates within tolerance
    bool in_unit_interval = true; // beta in [0,1] (reported, value not clamped)
    std::vector<double> beta_per_z;
    std::vector<double> stderr_per_z;
};

struct SinaiIndexSpec {
    std::vector<double> lambda_set = {2.0, 4.0, 8.0};
    std::vector<double> z_schedule;   // default: geometric ratio 10, length 4
    long long replicas = 20000;       // per t-node
    double head_factor = 1e-2;
    double tail_factor = 1e4;
    int per_decade = 8;
    double stabilize_tol = 0.05;
};

// through-origin regression of the functional against log lambda at each z;
// the reported beta comes from the most extreme z, with stabilization across
// the schedule as a diagnostic
SinaiIndex sinai_index(const ProcessFamily& f, Direction dir, const SinaiIndexSpec& spec,
                       std::uint64_t seed);

}  // namespace fluctlab
