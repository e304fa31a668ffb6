#pragma once
// Generalized arc-sine laws: the undershoot marginal q_beta, the joint
// undershoot/overshoot limit density p_beta, the overshoot marginal, their
// distribution functions, and Kolmogorov-Smirnov goodness of fit for passage
// records.

#include <vector>

#include "fluctlab/quadrature.hpp"
#include "fluctlab/simulate.hpp"

namespace fluctlab {

// beta in [0,1]; the boundary values are degenerate laws, kept explicit so
// fit code never evaluates a NaN density
struct ArcSineLaw {
    double beta = 0.5;
    bool degenerate() const { return beta <= 0.0 || beta >= 1.0; }
    // limit point of (U(r)/r, O(r)/r): beta=1 concentrates at (0,0) (creeping
    // regime), beta=0 at (1, infinity)
    std::pair<double, double> degenerate_point() const;
};

// density of the relative undershoot U(r)/r = 1 - S_{T-}/r,
// sin(beta pi)/pi * y^-beta (1-y)^(beta-1); Beta(1-beta, beta), mean 1-beta.
// The relative prior supremum S_{T-}/r then follows qbeta with parameter
// 1-beta, which is what makes its mean equal beta
double qbeta_pdf(double beta, double y);
double qbeta_cdf(double beta, double y);

// joint limit density of (U(r)/r, O(r)/r) on (0,1) x (0,inf):
// beta sin(beta pi)/pi * (1-u)^(beta-1) (u+w)^(-1-beta)
double pbeta_joint_pdf(double beta, double u, double w);

// w-marginal of pbeta: sin(beta pi)/pi * x^-beta (1+x)^-1; normalizable and
// equal to the classical Dynkin-Lamperti overshoot limit
double overshoot_limit_pdf(double beta, double x);
double overshoot_limit_cdf(double beta, double x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
    long long n = 0;
    bool pass = false;
};

// two-sided KS statistic against a continuous cdf with the asymptotic
// (Stephens-corrected) p-value; requires at least 100 samples
KsResult ks_fit(std::vector<double> samples, const Fn1& cdf, double level = 0.01);

struct MeanCheck {
    double value = 0.0;
    double stderr_ = 0.0;
};

// sample mean of prior_sup / r over passed records; tends to beta
MeanCheck mean_undershoot_check(const std::vector<PassageRecord>& records);

}  // namespace fluctlab
