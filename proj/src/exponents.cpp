#include "fluctlab/exponents.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace fluctlab {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

// dt/t integrals below never need mass beyond t ~ 100: every integrand here
// carries an e^{-t} or 1-F(t) factor that has died by then
QuadratureSpec capped(const QuadratureSpec& spec, double t_hi) {
    QuadratureSpec s = spec;
    s.t_hi = std::min(s.t_hi, t_hi);
    return s;
}

}  // namespace

double erfcx(double z) {
    if (z < 8.0) return std::exp(z * z) * std::erfc(z);
    const double w = 0.5 / (z * z);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 16; ++k) {
        term *= -w * (2 * k - 1);
        sum += term;
        if (std::abs(term) < 1e-17 * sum) break;
    }
    return sum / (z * std::sqrt(M_PI));
}

double positive_stable_cdf(double alpha, double z) {
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw std::invalid_argument("positive_stable_cdf: alpha in (0,1)");
    if (z <= 0.0) return 0.0;
    const double ef = std::pow(z, -alpha / (1.0 - alpha));
    if (ef == 0.0) return 1.0;
    const double pa = alpha / (1.0 - alpha);
    const double pb = 1.0 / (1.0 - alpha);
    auto integrand = [&](double th) {
        const double s = std::sin(th);
        const double a = std::pow(std::sin(alpha * th), pa) *
                         std::sin((1.0 - alpha) * th) / std::pow(s, pb);
        return std::exp(-ef * a);
    };
    QuadratureSpec qs;
    qs.rel_tol = 1e-10;
    qs.abs_tol = 1e-14;
    return std::clamp(integrate(integrand, 0.0, M_PI, qs).value / M_PI, 0.0, 1.0);
}

SubordinatorLaw stable_subordinator_law(double alpha) {
    SubordinatorLaw law;
    // the one-argument cdf is cached on a geometric grid once; marginals are
    // read off by self-similarity sigma_t ~ t^{1/alpha} S
    auto cache = std::make_shared<LogGridFn>(1e-8, 1e8, 96, [alpha](double z) {
        return positive_stable_cdf(alpha, z);
    });
    law.lap = [alpha](double t, double l) { return std::exp(-t * std::pow(l, alpha)); };
    law.cdf = [cache, alpha](double t, double x) {
        if (x <= 0.0) return 0.0;
        return std::clamp((*cache)(x * std::pow(t, -1.0 / alpha)), 0.0, 1.0);
    };
    law.phi = [alpha](double l) { return std::pow(l, alpha); };
    law.mean = std::numeric_limits<double>::quiet_NaN();
    law.name = "stable_subordinator";
    return law;
}

SubordinatorLaw poisson_subordinator_law(double rate) {
    SubordinatorLaw law;
    law.lap = [rate](double t, double l) {
        return std::exp(rate * t * (std::exp(-l) - 1.0));
    };
    law.cdf = [rate](double t, double x) {
        if (x < 0.0) return 0.0;
        return boost::math::gamma_q(std::floor(x) + 1.0, rate * t);
    };
    law.phi = [rate](double l) { return rate * (1.0 - std::exp(-l)); };
    law.mean = rate;
    law.name = "poisson";
    return law;
}

SubordinatorLaw drift_subordinator_law(double d) {
    SubordinatorLaw law;
    law.lap = [d](double t, double l) { return std::exp(-l * d * t); };
    law.cdf = [d](double t, double x) { return d * t <= x ? 1.0 : 0.0; };
    law.phi = [d](double l) { return d * l; };
    law.drift = d;
    law.mean = d;
    law.name = "drift";
    return law;
}

SubordinatorLaw gamma_subordinator_law(double shape, double scale) {
    SubordinatorLaw law;
    law.lap = [shape, scale](double t, double l) {
        return std::pow(1.0 + scale * l, -shape * t);
    };
    law.cdf = [shape, scale](double t, double x) {
        if (x <= 0.0) return 0.0;
        return boost::math::gamma_p(shape * t, x / scale);
    };
    law.phi = [shape, scale](double l) { return shape * std::log1p(scale * l); };
    law.mean = shape * scale;
    law.name = "gamma";
    return law;
}

SubordinatorLaw poisson_drift_law(double rate, double d) {
    SubordinatorLaw law;
    law.lap = [rate, d](double t, double l) {
        return std::exp(-l * d * t + rate * t * (std::exp(-l) - 1.0));
    };
    law.cdf = [rate, d](double t, double x) {
        const double r = x - d * t;
        if (r < 0.0) return 0.0;
        return boost::math::gamma_q(std::floor(r) + 1.0, rate * t);
    };
    law.phi = [rate, d](double l) { return d * l + rate * (1.0 - std::exp(-l)); };
    law.drift = d;
    law.mean = d + rate;
    law.name = "poisson_drift";
    return law;
}

MarginalLaw brownian_marginal() {
    MarginalLaw m;
    m.lap_plus = [](double t, double l) {
        return 0.5 * erfcx(l * std::sqrt(0.5 * t));
    };
    m.pos_prob = [](double) { return 0.5; };
    m.name = "brownian";
    return m;
}

MarginalLaw symmetric_stable_marginal(double alpha, double c) {
    MarginalLaw m;
    // Parseval form: E[e^{-l xi_t}; xi_t >= 0] = (l/pi) int_0^inf
    //   e^{-c t u^alpha} / (l^2 + u^2) du, real part of the CF pairing
    m.lap_plus = [alpha, c](double t, double l) {
        if (l == 0.0) return 0.5;
        QuadratureSpec qs;
        qs.rel_tol = 1e-10;
        const double u_hot = std::pow(40.0 / (c * t), 1.0 / alpha);
        const double split = std::max(10.0 * l, 10.0);
        double acc = integrate([&](double u) {
            return std::exp(-c * t * std::pow(u, alpha)) / (l * l + u * u);
        }, 0.0, std::min(split, u_hot), qs).value;
        if (u_hot > split)
            acc += integrate_log([&](double u) {
                return std::exp(-c * t * std::pow(u, alpha)) / (l * l + u * u);
            }, split, u_hot, qs).value;
        return l / M_PI * acc;
    };
    m.pos_prob = [](double) { return 0.5; };
    m.name = "symmetric_stable";
    return m;
}

MarginalLaw marginal_from_subordinator(const SubordinatorLaw& law) {
    MarginalLaw m;
    m.lap_plus = law.lap;
    m.pos_prob = [](double) { return 1.0; };
    m.name = law.name;
    return m;
}

double fristedt_log_kappa(const MarginalLaw& m, double q, double lambda,
                          const QuadratureSpec& spec) {
    if (q < 0.0 || lambda < 0.0) throw std::invalid_argument("fristedt_log_kappa: q, lambda");
    // with q = 0 the second term decays only through lap_plus, keep the wide
    // default window; any q > 0 dies by t ~ 100/q
    const QuadratureSpec s = q > 0.0 ? capped(spec, 120.0 / std::min(1.0, q)) : spec;
    auto h = [&](double t) {
        return std::exp(-t) * m.pos_prob(t) - std::exp(-q * t) * m.lap_plus(t, lambda);
    };
    return dtt_integral(h, s).value;
}

double fristedt_phi_ratio(const MarginalLaw& m, double q, double l1, double l2,
                          const QuadratureSpec& spec) {
    return std::exp(fristedt_log_kappa(m, q, l1, spec) -
                    fristedt_log_kappa(m, q, l2, spec));
}

double phi_from_triplet(const LevyTriplet& t, double lambda, const QuadratureSpec& spec) {
    if (t.q2 != 0.0) throw std::invalid_argument("phi_from_triplet: not a subordinator");
    for (double x : {0.01, 1.0, 100.0})
        if (t.levy.tail_minus(x) > 0.0)
            throw std::invalid_argument("phi_from_triplet: negative jumps present");
    const double d = t.a - mean_small_jumps(t.levy, spec);
    double phi = d * lambda;
    if (lambda > 0.0 && t.levy.right_tail) {
        const double hi = std::max(60.0 / lambda, 60.0);
        phi += lambda * integrate_log([&](double x) {
            return std::exp(-lambda * x) * t.levy.right_tail(x);
        }, 1e-14, hi, spec).value;
    }
    for (const auto& [pos, mass] : t.levy.atoms)
        phi += mass * (1.0 - std::exp(-lambda * pos));
    return phi;
}

double g1_function(const SubordinatorLaw& law, double y, const QuadratureSpec& spec) {
    if (!(y > 0.0)) throw std::invalid_argument("g1_function: y > 0");
    const double x = 1.0 / y;
    // cdfs with drift components step in t, so the kernel grid is denser than
    // the smooth-integrand default
    QuadratureSpec s = capped(spec, 80.0);
    s.per_decade = std::max(s.per_decade, 256);
    auto g = [&](double t) { return std::exp(-t) * (1.0 - law.cdf(t, x)); };
    return dtt_integral(g, s).value;
}

double g1_mellin(const SubordinatorLaw& law, double theta, const QuadratureSpec& spec) {
    if (!(theta > 0.0)) throw std::invalid_argument("g1_mellin: theta > 0");
    const double v_lo = 1e-10, v_hi = 80.0;
    // G1 is slowly varying on the log axis apart from kinks at integer jump
    // levels; tabulating it densely once makes the outer integral cheap
    LogGridFn cache(theta / v_hi, theta / v_lo, std::max(spec.per_decade, 256),
                    [&](double yy) { return g1_function(law, yy, spec); });
    QuadratureSpec outer = spec;
    outer.rel_tol = std::max(spec.rel_tol, 1e-8);
    return integrate_log([&](double v) { return std::exp(-v) * cache(theta / v); },
                         v_lo, v_hi, outer).value;
}

double g2_function(const SubordinatorLaw& law, double x, const QuadratureSpec& spec) {
    if (!(x >= 0.0)) throw std::invalid_argument("g2_function: x >= 0");
    QuadratureSpec s = spec;
    s.per_decade = std::max(s.per_decade, 256);
    auto g = [&](double t) { return -std::expm1(-t) * law.cdf(t, x); };
    return dtt_integral(g, s).value;
}

double g2_laplace(const SubordinatorLaw& law, double theta, const QuadratureSpec& spec) {
    if (!(theta > 0.0)) throw std::invalid_argument("g2_laplace: theta > 0");
    auto g = [&](double t) { return -std::expm1(-t) * law.lap(t, theta); };
    return dtt_integral(g, spec).value;
}

RecoveryResult mean_from_g2(const SubordinatorLaw& law, const std::vector<double>& probes,
                            const QuadratureSpec& spec) {
    if (probes.empty()) throw std::invalid_argument("mean_from_g2: probes");
    // the LLN transition of P(sigma_t <= x) narrows like x^{-1/2} on the log-t
    // axis, so the recovery probes use a denser grid than the default
    QuadratureSpec dense = spec;
    dense.per_decade = std::max(spec.per_decade, 256);
    RecoveryResult out;
    for (double x : probes)
        out.probe_values.push_back(
            std::exp(kEulerGamma + std::log(x) - g2_function(law, x, dense)));
    out.value = out.probe_values.back();
    for (double v : out.probe_values)
        out.spread = std::max(out.spread, std::abs(v - out.value) / out.value);
    return out;
}

RecoveryResult drift_from_g1(const SubordinatorLaw& law, const std::vector<double>& probes,
                             const QuadratureSpec& spec) {
    if (probes.empty()) throw std::invalid_argument("drift_from_g1: probes");
    QuadratureSpec dense = spec;
    dense.per_decade = std::max(spec.per_decade, 256);
    RecoveryResult out;
    for (double y : probes)
        out.probe_values.push_back(
            std::exp(kEulerGamma + g1_function(law, y, dense) - std::log(y)));
    out.value = out.probe_values.back();
    for (double v : out.probe_values)
        out.spread = std::max(out.spread, std::abs(v - out.value) / out.value);
    return out;
}

}  // namespace fluctlab
