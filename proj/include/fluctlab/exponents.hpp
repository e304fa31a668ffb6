#pragma once
// Ladder-height Laplace exponents and their integral representations: the
// bivariate exponent as a dt/t integral over half-line Laplace functionals,
// the two potential-theoretic kernels G1 / G2 built from a subordinator's
// marginals, their transforms, and the mean / drift recovery limits.

#include <functional>
#include <string>

#include "fluctlab/models.hpp"
#include "fluctlab/quadrature.hpp"

namespace fluctlab {

// scaled complementary error function e^{z^2} erfc(z), stable for large z
double erfcx(double z);

// subordinator described through closed-form marginals; cdf(t, x) is
// P(sigma_t <= x) including any mass at zero, phi the exact Laplace exponent
struct SubordinatorLaw {
    std::function<double(double, double)> lap;  // E e^{-l sigma_t}
    std::function<double(double, double)> cdf;  // P(sigma_t <= x)
    Fn1 phi;                                    // exact exponent, for oracles
    double drift = 0.0;
    double mean = 0.0;                          // E sigma_1; NaN when infinite
    std::string name;
};

SubordinatorLaw stable_subordinator_law(double alpha);     // phi = l^alpha
SubordinatorLaw poisson_subordinator_law(double rate);     // unit jumps
SubordinatorLaw drift_subordinator_law(double d);          // sigma_t = d t
SubordinatorLaw gamma_subordinator_law(double shape, double scale);
SubordinatorLaw poisson_drift_law(double rate, double d);

// one-sided stable cdf P(S <= z) for E e^{-l S} = e^{-l^alpha}, 0 < alpha < 1,
// by the single-integral representation on (0, pi)
double positive_stable_cdf(double alpha, double z);

// two-sided process described through its half-line Laplace functional
// E[e^{-l xi_t} ; xi_t >= 0] and P(xi_t >= 0)
struct MarginalLaw {
    std::function<double(double, double)> lap_plus;
    Fn1 pos_prob;
    std::string name;
};

MarginalLaw brownian_marginal();                           // standard BM
MarginalLaw symmetric_stable_marginal(double alpha, double c);
MarginalLaw marginal_from_subordinator(const SubordinatorLaw& law);

// log of the ascending-ladder bivariate exponent up to its multiplicative
// normalization:  int dt/t [ e^{-t} P(xi_t >= 0) - e^{-q t} lap_plus(t, l) ]
double fristedt_log_kappa(const MarginalLaw& m, double q, double lambda,
                          const QuadratureSpec& spec = {});

// kappa(q, l1) / kappa(q, l2); the normalization cancels, so this is exact
// up to quadrature error
double fristedt_phi_ratio(const MarginalLaw& m, double q, double l1, double l2,
                          const QuadratureSpec& spec = {});

// subordinator Laplace exponent rebuilt from a (finite-variation, spectrally
// positive) triplet: d l + l int e^{-lx} tail(x) dx + atom terms
double phi_from_triplet(const LevyTriplet& t, double lambda,
                        const QuadratureSpec& spec = {});

// G1(y) = int dt/t e^{-t} P(sigma_t > 1/y), nondecreasing, ~ log y at infinity
double g1_function(const SubordinatorLaw& law, double y, const QuadratureSpec& spec = {});

// hat-G1(theta) = int_0^inf e^{-v} G1(theta / v) dv; exp of it equals 1 + phi
double g1_mellin(const SubordinatorLaw& law, double theta, const QuadratureSpec& spec = {});

// G2(x) = int dt/t (1 - e^{-t}) P(sigma_t <= x), the mass at sigma_t = 0 counts
double g2_function(const SubordinatorLaw& law, double x, const QuadratureSpec& spec = {});

// int dt/t (1 - e^{-t}) E e^{-theta sigma_t}; exp of minus it equals phi/(1+phi)
double g2_laplace(const SubordinatorLaw& law, double theta, const QuadratureSpec& spec = {});

struct RecoveryResult {
    double value = 0.0;
    double spread = 0.0;              // max drift of the limit across probes
    std::vector<double> probe_values; // per-probe exp(gamma + R)
};

// E sigma_1 = exp(gamma + R), R = lim_x (log x - G2(x)); probes on a decade grid
RecoveryResult mean_from_g2(const SubordinatorLaw& law,
                            const std::vector<double>& probes = {1e2, 1e3, 1e4},
                            const QuadratureSpec& spec = {});

// drift = exp(gamma + R), R = lim_y (G1(y) - log y)
RecoveryResult drift_from_g1(const SubordinatorLaw& law,
                             const std::vector<double>& probes = {1e2, 1e3, 1e4},
                             const QuadratureSpec& spec = {});

}  // namespace fluctlab
