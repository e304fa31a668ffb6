#include "fluctlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fluctlab {

double LevyMeasure::tail_plus(double x) const {
    double t = right_tail ? right_tail(x) : 0.0;
    for (const auto& [pos, mass] : atoms)
        if (pos > x) t += mass;
    return t;
}

double LevyMeasure::tail_minus(double x) const {
    double t = left_tail ? left_tail(x) : 0.0;
    for (const auto& [pos, mass] : atoms)
        if (pos < -x) t += mass;
    return t;
}

double LevyMeasure::draw_jump(RngStream& rng) const {
    const double mp = tail_plus(eps);
    const double mm = tail_minus(eps);
    if (mp + mm <= 0.0) throw std::runtime_error("draw_jump: no mass above eps");
    const bool positive = rng.u01() * (mp + mm) < mp;
    const double m = positive ? mp : mm;
    const double u = rng.u01() * m;
    // smallest x with tail(x) <= u; tails are nonincreasing, atoms allowed
    auto tail = [&](double x) { return positive ? tail_plus(x) : tail_minus(x); };
    double lo = eps, hi = std::max(2.0 * eps, 1.0);
    while (tail(hi) > u && hi < 1e18) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);  // bisect in log-space
        if (tail(mid) > u)
            lo = mid;
        else
            hi = mid;
        if (hi / lo < 1.0 + 1e-14) break;
    }
    return positive ? hi : -hi;
}

LevyMeasure exponential_measure(double w_plus, double mu_plus, double w_minus,
                                double mu_minus) {
    LevyMeasure m;
    m.right_tail = [w_plus, mu_plus](double x) { return w_plus * std::exp(-mu_plus * x); };
    m.left_tail = [w_minus, mu_minus](double x) { return w_minus * std::exp(-mu_minus * x); };
    return m;
}

LevyMeasure lomax_measure(double w, double a, double scale, bool symmetric) {
    LevyMeasure m;
    auto tail = [w, a, scale](double x) { return w * std::pow(1.0 + x / scale, -a); };
    m.right_tail = tail;
    m.left_tail = symmetric ? Fn1(tail) : Fn1([](double) { return 0.0; });
    return m;
}

LevyMeasure pareto_measure(double w, double a, double xmin, bool symmetric) {
    LevyMeasure m;
    auto tail = [w, a, xmin](double x) {
        return x <= xmin ? w : w * std::pow(x / xmin, -a);
    };
    m.right_tail = tail;
    m.left_tail = symmetric ? Fn1(tail) : Fn1([](double) { return 0.0; });
    return m;
}

LevyMeasure atom_measure(double mass, double position) {
    LevyMeasure m;
    m.right_tail = [](double) { return 0.0; };
    m.left_tail = [](double) { return 0.0; };
    m.atoms.emplace_back(position, mass);
    return m;
}

LevyMeasure power_small_measure(double a) {
    LevyMeasure m;
    m.right_tail = [a](double x) { return x >= 1.0 ? 0.0 : std::pow(x, -a) - 1.0; };
    m.left_tail = [](double) { return 0.0; };
    return m;
}

TailIntegral integrated_tail(const LevyMeasure& m, double x, const QuadratureSpec& spec,
                             double horizon) {
    TailIntegral out;
    const double edge = std::max(x, horizon);
    const double tH = m.right_tail ? m.right_tail(edge) : 0.0;
    if (tH > 0.0) {
        // local decay index at the horizon decides whether the remainder closes
        const double tH2 = m.right_tail(edge / 2.0);
        out.local_index = std::log(tH2 / tH) / std::log(2.0);
        if (out.local_index <= 1.05) {
            out.finite = false;
            return out;
        }
        out.tail_bound = edge * tH / (out.local_index - 1.0);
    } else {
        out.local_index = std::numeric_limits<double>::infinity();
    }
    double acc = 0.0;
    if (x < horizon && m.right_tail) {
        const double lo = std::max(x, 1e-12);
        acc = integrate_log([&m](double z) { return m.right_tail(z); }, lo, horizon, spec).value;
        if (x < lo) acc += m.right_tail(lo) * (lo - x);  // flat stub near zero
    }
    for (const auto& [pos, mass] : m.atoms)
        if (pos > x) acc += mass * (pos - x);
    out.value = acc + out.tail_bound;
    return out;
}

IntegratedTail make_integrated_tail(const LevyMeasure& m, const QuadratureSpec& spec,
                                    double horizon) {
    IntegratedTail out;
    TailIntegral probe = integrated_tail(m, 0.0, spec, horizon);
    out.finite = probe.finite;
    out.local_index = probe.local_index;
    if (!probe.finite) {
        out.value = [](double) -> double {
            throw std::runtime_error("integrated tail diverges");
        };
        return out;
    }
    out.value = [m, spec, horizon](double x) { return integrated_tail(m, x, spec, horizon).value; };
    return out;
}

LongTailResult long_tailed_test(const Fn1& tail, const std::vector<double>& probes,
                                const std::vector<double>& shifts, double tol) {
    LongTailResult out;
    if (probes.empty() || shifts.empty()) throw std::invalid_argument("long_tailed_test: empty grid");
    for (double x : probes) {
        const double base = tail(x);
        double dev = std::numeric_limits<double>::infinity();
        if (base > 0.0) {
            dev = 0.0;
            for (double t : shifts) dev = std::max(dev, std::abs(tail(x + t) / base - 1.0));
        }
        out.deviations.push_back(dev);
    }
    out.max_deviation = out.deviations.back();
    out.verdict = out.max_deviation <= tol;
    out.improving = true;
    for (size_t i = 1; i < out.deviations.size(); ++i)
        if (out.deviations[i] > out.deviations[i - 1] * 1.5 + 1e-12) out.improving = false;
    return out;
}

TailBalance tail_balance(const LevyMeasure& m, double x) {
    TailBalance out;
    const double tp = m.tail_plus(x);
    const double tm = m.tail_minus(x);
    if (tp + tm <= 0.0) {
        out.defined = false;
        return out;
    }
    out.p_hat = tp / (tp + tm);
    out.q_hat = 1.0 - out.p_hat;  // exact complement by construction
    return out;
}

bool small_jumps_integrable(const LevyMeasure& m) {
    // int_0^1 (tail_plus + tail_minus) dz < inf  iff  int_{|x|<1} |x| Pi(dx) < inf;
    // probe the local growth at a sequence of small z and integrate what is seen
    auto f = [&m](double z) {
        return (m.right_tail ? m.right_tail(z) : 0.0) + (m.left_tail ? m.left_tail(z) : 0.0);
    };
    const double f_lo = f(1e-10), f_lo2 = f(2e-10);
    if (f_lo > 0.0 && f_lo2 > 0.0) {
        const double idx = std::log(f_lo / f_lo2) / std::log(2.0);  // tail ~ z^-idx
        if (idx >= 1.0 - 1e-9) return false;
    }
    QuadratureSpec spec;
    spec.rel_tol = 1e-7;
    const double v = integrate_log(f, 1e-10, 1.0, spec).value;
    return std::isfinite(v);
}

namespace {

// int_0^1 tail(z) dz; below the cutoff the tail is continued as the local
// power law fitted there, which is exact for the stable families and
// harmless for tails that flatten out
double tail_integral_01(const Fn1& tail, const QuadratureSpec& spec) {
    const double x0 = 1e-8;
    double acc = integrate_log(tail, x0, 1.0, spec).value;
    const double t0 = tail(x0);
    if (t0 > 0.0) {
        double p = std::log2(tail(0.5 * x0) / t0);
        p = std::clamp(p, 0.0, 0.999);
        acc += x0 * t0 / (1.0 - p);
    }
    return acc;
}

}  // namespace

double mean_small_jumps(const LevyMeasure& m, const QuadratureSpec& spec) {
    // int_{(0,1)} x Pi(dx) = -tail(1) + int_0^1 tail(z)dz per side (by parts)
    double acc = 0.0;
    if (m.right_tail) acc += tail_integral_01(m.right_tail, spec) - m.right_tail(1.0);
    if (m.left_tail) acc -= tail_integral_01(m.left_tail, spec) - m.left_tail(1.0);
    for (const auto& [pos, mass] : m.atoms)
        if (std::abs(pos) < 1.0) acc += pos * mass;
    return acc;
}

}  // namespace fluctlab
