#include "fluctlab/arcsine.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluctlab {

std::pair<double, double> ArcSineLaw::degenerate_point() const {
    if (beta >= 1.0) return {0.0, 0.0};
    return {1.0, std::numeric_limits<double>::infinity()};
}

namespace {

void require_interior_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("arc-sine: beta must lie in (0,1); boundary values are degenerate laws");
}

}  // namespace

double qbeta_pdf(double beta, double y) {
    require_interior_beta(beta);
    if (!(y > 0.0 && y < 1.0)) throw std::domain_error("qbeta_pdf: y outside (0,1)");
    return std::sin(beta * M_PI) / M_PI * std::pow(y, -beta) * std::pow(1.0 - y, beta - 1.0);
}

double qbeta_cdf(double beta, double y) {
    require_interior_beta(beta);
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    return boost::math::ibeta(1.0 - beta, beta, y);
}

double pbeta_joint_pdf(double beta, double u, double w) {
    require_interior_beta(beta);
    if (!(u > 0.0 && u < 1.0) || !(w > 0.0)) throw std::domain_error("pbeta_joint_pdf: (u,w) outside (0,1)x(0,inf)");
    return beta * std::sin(beta * M_PI) / M_PI * std::pow(1.0 - u, beta - 1.0) *
           std::pow(u + w, -1.0 - beta);
}

double overshoot_limit_pdf(double beta, double x) {
    require_interior_beta(beta);
    if (!(x > 0.0)) throw std::domain_error("overshoot_limit_pdf: x must be positive");
    return std::sin(beta * M_PI) / M_PI * std::pow(x, -beta) / (1.0 + x);
}

double overshoot_limit_cdf(double beta, double x) {
    require_interior_beta(beta);
    if (x <= 0.0) return 0.0;
    return boost::math::ibeta(1.0 - beta, beta, x / (1.0 + x));
}

KsResult ks_fit(std::vector<double> samples, const Fn1& cdf, double level) {
    if (samples.size() < 100) throw std::invalid_argument("ks_fit: need at least 100 samples");
    std::sort(samples.begin(), samples.end());
    KsResult r;
    r.n = static_cast<long long>(samples.size());
    double n = static_cast<double>(r.n);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double F = cdf(samples[i]);
        r.statistic = std::max(r.statistic, std::abs(F - (i + 1.0) / n));
        r.statistic = std::max(r.statistic, std::abs(F - i / n));
    }
    double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * r.statistic;
    double p = 0.0;
    for (int k = 1; k <= 101; ++k) {
        double term = 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    r.p_value = std::clamp(p, 0.0, 1.0);
    r.pass = r.p_value > level;
    return r;
}

MeanCheck mean_undershoot_check(const std::vector<PassageRecord>& records) {
    if (records.empty()) throw std::invalid_argument("mean_undershoot_check: no records");
    double sum = 0.0, sumsq = 0.0;
    for (const auto& rec : records) {
        double v = rec.prior_sup / rec.r;
        sum += v;
        sumsq += v * v;
    }
    double n = static_cast<double>(records.size());
    MeanCheck m;
    m.value = sum / n;
    double var = n > 1 ? (sumsq - n * m.value * m.value) / (n - 1.0) : 0.0;
    m.stderr_ = std::sqrt(std::max(var, 0.0) / n);
    return m;
}

}  // namespace fluctlab
