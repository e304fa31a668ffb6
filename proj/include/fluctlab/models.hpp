#pragma once
// Process families (stable / Brownian-with-drift / compound-Poisson-with-drift),
// their characteristic exponents, stable-law helpers, norming sequences and the
// domain-of-attraction deviation check.

#include <complex>
#include <variant>
#include <vector>

#include "fluctlab/measures.hpp"
#include "fluctlab/quadrature.hpp"
#include "fluctlab/rng.hpp"

namespace fluctlab {

using cdouble = std::complex<double>;

// single-jump law for compound Poisson families; continuous part described by
// tails, point masses listed separately so tail quadratures stay smooth;
// continuous mass plus atom mass is 1, `sample` is exact inverse transform
struct JumpLaw {
    Fn1 tail_plus;                             // continuous P(J > x), x >= 0; null = none
    Fn1 tail_minus;                            // continuous P(J < -x), x >= 0; null = none
    std::vector<std::pair<double, double>> atoms;  // (position, probability)
    std::function<double(RngStream&)> sample;
    double mean = 0.0;                         // E J; NaN when undefined
    Fn1 laplace;                               // E e^{-l J}; null when unavailable
};

JumpLaw exp_jump(double mu);                   // Exp(mu) on (0, inf)
JumpLaw lomax_jump(double a, double scale);    // tail (1 + x/scale)^-a on (0, inf)
JumpLaw pareto_sym_jump(double a, double xmin);// sign * xmin * U^(-1/a), symmetric
JumpLaw unit_jump();                           // atom at +1

struct Stable {
    double alpha = 2.0;
    double c = 1.0;
    double delta = 0.0;
};

struct BrownianDrift {
    double mu = 0.0;
    double sigma = 1.0;
};

struct CompoundPoissonDrift {
    double rate = 1.0;
    JumpLaw jumps;
    double drift = 0.0;
};

using ProcessFamily = std::variant<Stable, BrownianDrift, CompoundPoissonDrift>;

struct LevyTriplet {
    double a = 0.0;    // linear term under the |x|<1 truncation
    double q2 = 0.0;   // Gaussian variance coefficient
    LevyMeasure levy;
};

LevyTriplet to_triplet(const ProcessFamily& f);

// characteristic exponent Psi(l) from a triplet; the jump integral is done on
// the tail functions (integration by parts), atoms added exactly
cdouble char_exponent(const LevyTriplet& t, double lambda, const QuadratureSpec& spec = {});

// the three-branch strictly stable exponent; at alpha=1 the skew factor is the
// limiting tan(pi/2) = +inf, so delta != 0 produces an infinite imaginary part
// (such laws are outside the strictly-stable family used everywhere else)
cdouble stable_exponent(double alpha, double c, double delta, double lambda);

// rho = P(xi_1 >= 0) = 1/2 + arctan(delta tan(pi alpha/2)) / (pi alpha)
double positivity_param(double alpha, double delta);

struct ScalingResult {
    double b = 0.0;
    double stderr_b = 0.0;            // only for the Monte Carlo path
    const char* method = "closed_form";
};

// norming b(t): t^(1/alpha) for stable (self-norming, constants are absorbed
// by the target scale); otherwise the |xi_t| upper-quartile radius
// P(|xi_t| > b) = 1/4, Monte Carlo when a draw is affordable, else
// characteristic-function inversion
ScalingResult scaling_b(const ProcessFamily& f, double t, std::uint64_t seed = 1,
                        long long replicas = 100000);

struct DAResult {
    double max_deviation = 0.0;
    std::vector<double> per_t;        // max over lambda, one entry per t probe
    std::vector<double> t_grid;
};

// relative deviation |t Psi(l / b(t)) - Psi_target(l)| / |Psi_target(l)| over
// the probe grids; decay along t supports a domain-of-attraction claim
DAResult da_limit_check(const ProcessFamily& f, const Stable& target,
                        const std::vector<double>& lambda_grid,
                        const std::vector<double>& t_grid, std::uint64_t seed = 1);

// one exact draw of xi_t (no discretization for any family)
double sample_marginal(const ProcessFamily& f, double t, RngStream& rng);

// expectation of xi_1 when it exists (NaN otherwise)
double family_mean(const ProcessFamily& f);

bool spectrally_positive(const CompoundPoissonDrift& f);

}  // namespace fluctlab
