#include "fluctlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fluctlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// exp(-kappa y)-weighted convolution  int_0^inf e^{-ky} pi_tail(x+y) dy with
// progressive horizon doubling; diverged set when the mass keeps growing
double lebesgue_convolution(const Fn1& pi_tail, double kappa, double x,
                            const QuadratureSpec& spec, bool* diverged) {
    Fn1 g = [&](double y) { return std::exp(-kappa * y) * pi_tail(x + y); };
    if (kappa > 0.0) {
        double y_hi = 60.0 / kappa;
        return integrate_log(g, 1e-12, y_hi, spec).value;
    }
    double y_hi = std::max(100.0, 8.0 * x);
    double acc = integrate_log(g, 1e-12, y_hi, spec).value;
    for (int round = 0; round < 48; ++round) {
        double add = integrate_log(g, y_hi, 2.0 * y_hi, spec).value;
        acc += add;
        y_hi *= 2.0;
        if (add < 1e-9 * std::abs(acc) + 1e-300) return acc;
    }
    if (diverged) *diverged = true;
    return acc;
}

}  // namespace

LadderTriplets ladder_closed_form(const CompoundPoissonDrift& f) {
    if (!spectrally_positive(f) || !(f.drift < 0.0))
        throw std::invalid_argument(
            "ladder_closed_form: needs a spectrally positive compound Poisson with negative drift");
    double mean = family_mean(ProcessFamily{f});
    if (std::isnan(mean)) throw std::invalid_argument("ladder_closed_form: jump mean undefined");

    LadderTriplets lt;
    lt.down.kappa0 = dual_killing_rate(f);
    lt.down.d = 1.0;
    lt.down.total = 0.0;
    lt.mu = 1.0;
    lt.up.kappa0 = std::max(0.0, -mean);
    lt.up.d = 0.0;

    double rate = f.rate;
    JumpLaw jumps = f.jumps;
    Fn1 pi_tail = [rate, jumps](double x) {
        double t = jumps.tail_plus ? jumps.tail_plus(x) : 0.0;
        for (const auto& [pos, prob] : jumps.atoms)
            if (pos > x) t += prob;
        return rate * t;
    };
    double kh = lt.down.kappa0;
    lt.up.tail = [pi_tail, kh](double x) {
        bool div = false;
        return lebesgue_convolution(pi_tail, kh, x, QuadratureSpec{}, &div);
    };
    lt.po_density = [pi_tail, kh, tail = lt.up.tail](double x) {
        return pi_tail(x) - kh * tail(x);
    };
    lt.up.total = lt.up.tail(1e-10);
    return lt;
}

EaiResult eai_rhs(const PotentialMeasure& vhat, const Fn1& pi_tail, double x,
                  const QuadratureSpec& spec) {
    if (!(x > 0.0)) throw std::invalid_argument("eai_rhs: x must be positive");
    if (!vhat.valid) throw std::invalid_argument("eai_rhs: potential measure unusable");
    EaiResult r;
    if (vhat.closed_form) {
        if (vhat.atom0 > 0.0) {
            r.value = vhat.atom0 * pi_tail(x);
            return r;
        }
        r.value = lebesgue_convolution(pi_tail, vhat.kappa0, x, spec, &r.diverged) / vhat.d_hat;
        return r;
    }
    double var = 0.0;
    for (std::size_t i = 0; i + 1 < vhat.edges.size(); ++i) {
        double mid = 0.5 * (vhat.edges[i] + vhat.edges[i + 1]);
        double w = pi_tail(x + mid);
        r.value += vhat.masses[i] * w;
        var += vhat.stderrs[i] * vhat.stderrs[i] * w * w;
    }
    r.value += vhat.atom0 * pi_tail(x);
    r.stderr_ = std::sqrt(var);
    return r;
}

EaBreakdown ea_rhs(const LadderTriplets& lt, double x, const QuadratureSpec& spec) {
    if (!(x > 0.0)) throw std::invalid_argument("ea_rhs: x must be positive");
    EaBreakdown b;
    if (lt.down.d > 0.0) {
        if (!lt.po_density)
            throw std::runtime_error("ea_rhs: dual drift is positive but the po density is missing");
        b.drift_term = lt.down.d * lt.po_density(x);
    }
    if (lt.down.kappa0 > 0.0 && lt.up.tail) b.kill_term = lt.down.kappa0 * lt.up.tail(x);
    if (lt.down.tail && lt.down.total > 0.0) {
        if (!lt.po_density)
            throw std::runtime_error("ea_rhs: jump term needs the po density");
        b.jump_term = integrate_log(
                          [&](double u) { return lt.po_density(x + u) * lt.down.tail(u); },
                          1e-12, 1e6, spec)
                          .value;
    }
    b.value = b.jump_term + b.drift_term + b.kill_term;
    return b;
}

double tail_asymptote_finite_mean(const Fn1& pi_tail_integrated, double mu, double x) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("tail_asymptote_finite_mean: dual ladder mean must be finite");
    return pi_tail_integrated(x) / mu;
}

double tail_asymptote_killed(const Fn1& pi_tail, double kappa0_hat, double x) {
    if (!(kappa0_hat > 0.0))
        throw std::invalid_argument("tail_asymptote_killed: needs a killed dual ladder");
    return pi_tail(x) / kappa0_hat;
}

double corollary_rv_asymptote(const Fn1& pi_tail, double alpha, double mu, double x) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("corollary_rv_asymptote: alpha must lie in (0,1]");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("corollary_rv_asymptote: mu must be finite");
    return x * pi_tail(x) / (alpha * mu);
}

long long EmpiricalTail::count_above(double x) const {
    return sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
}

double EmpiricalTail::tail(double x) const { return scale * count_above(x); }

double EmpiricalTail::mass_in(double a, double b) const {
    return scale * (count_above(a) - count_above(b));
}

EmpiricalTail empirical_po(const LadderIncrements& inc, double total_mass) {
    EmpiricalTail t;
    t.sorted = inc.sizes;
    std::sort(t.sorted.begin(), t.sorted.end());
    t.scale = t.sorted.empty() ? 0.0 : total_mass / static_cast<double>(t.sorted.size());
    return t;
}

DecadeChoice top_sampled_decade(const EmpiricalTail& po, long long min_tail) {
    DecadeChoice c;
    if (po.sorted.empty()) return c;
    int k_hi = static_cast<int>(std::floor(std::log10(po.sorted.back())));
    for (int k = k_hi; k >= -12; --k) {
        double hi = std::pow(10.0, k + 1);
        long long n = po.count_above(hi);
        if (n >= min_tail) {
            c.lo = std::pow(10.0, k);
            c.hi = hi;
            c.ok = true;
            c.tail_count = n;
            return c;
        }
    }
    return c;
}

KeyRenewalResult key_renewal_limit(const EmpiricalTail& po, const Fn1& pi_tail, double mu,
                                   const Fn1& g, double g_integral, double x) {
    KeyRenewalResult r;
    r.tail_count = po.count_above(x);
    r.sparse = r.tail_count < 30;
    double acc = 0.0;
    for (auto it = std::upper_bound(po.sorted.begin(), po.sorted.end(), x); it != po.sorted.end();
         ++it)
        acc += g(*it - x);
    r.value = po.scale * acc / pi_tail(x);
    r.target = g_integral / mu;
    r.ratio = r.target != 0.0 ? r.value / r.target : 0.0;
    return r;
}

BrtResult brt_window(const EmpiricalTail& po, const Fn1& pi_tail, double mu,
                     const PotentialMeasure& vhat, double x, double z) {
    if (!(z > 0.0)) throw std::invalid_argument("brt_window: z must be positive");
    BrtResult r;
    r.count = po.count_above(x) - po.count_above(x + z);
    r.sparse = r.count < 30;
    r.window_mass = po.scale * r.count;
    double pt = pi_tail(x);
    r.ratio = r.window_mass / (z / mu * pt);
    r.bound_lhs = r.window_mass / pt;
    r.bound_rhs = vhat.mass_upto(z);
    r.bound_ok = r.bound_lhs <= r.bound_rhs + 1e-12;
    return r;
}

ZeroBehavior zero_behavior_check(const LadderTriplets& lt, const Fn1& pi_tail, ZeroCase c,
                                 double x_lo, double x_hi) {
    ZeroBehavior z;
    RvFit po_fit = rv_index_fit(lt.up.tail, Direction::at_zero, x_lo, x_hi);
    RvFit pi_fit = rv_index_fit(pi_tail, Direction::at_zero, x_lo, x_hi);
    z.po_index = po_fit.index;
    z.pi_index = pi_fit.index;
    if (c == ZeroCase::drift_positive) {
        double alpha = -z.po_index;
        z.hypothesis_ok = lt.down.d > 0.0 && alpha > 0.0 && alpha <= 1.0;
        z.consistent = z.hypothesis_ok && po_fit.ok && pi_fit.ok &&
                       std::abs(z.po_index - (z.pi_index + 1.0)) <= 0.1;
        return z;
    }
    z.hypothesis_ok = std::isfinite(lt.down.total);
    z.limit_target = 1.0 / (lt.down.total + lt.down.kappa0);
    z.limit_ratio = lt.up.tail(x_lo) / pi_tail(x_lo);
    z.consistent = z.hypothesis_ok && std::abs(z.po_index - z.pi_index) <= 0.1 &&
                   std::abs(z.limit_ratio / z.limit_target - 1.0) <= 0.15;
    return z;
}

RwOracleResult rw_ladder_oracle(const std::function<double(RngStream&)>& step, int n_max,
                                long long replicas, std::uint64_t seed, double barrier) {
    RwOracleResult r;
    r.replicas = replicas;
    double sum_desc = 0.0;
    double sum_nhat = 0.0;
    long long desc_count = 0;
    for (long long w = 0; w < replicas; ++w) {
        RngStream rng(seed, {0x50bULL, static_cast<std::uint64_t>(w)});
        double z = 0.0;
        bool asc = false, desc = false;
        for (int k = 1; k <= n_max; ++k) {
            z += step(rng);
            if (!desc && z <= 0.0) {
                sum_desc += z;
                sum_nhat += k;
                ++desc_count;
                desc = true;
            }
            if (!asc && z > 0.0) {
                r.ascending_heights.push_back(z);
                asc = true;
            }
            if (asc && desc) break;
            if (desc && z < -barrier) break;  // ascent effectively unreachable
        }
        if (!asc) ++r.no_ascend;
    }
    r.n_descend = desc_count;
    if (desc_count > 0) {
        r.mean_descend = sum_desc / desc_count;
        r.en_hat = sum_nhat / desc_count;
        r.m = std::abs(r.mean_descend);
    }
    r.sub_mass = static_cast<double>(replicas - r.no_ascend) / replicas;
    return r;
}

RwRenewalCheck rw_key_renewal(const RwOracleResult& rw, const Fn1& step_tail, const Fn1& g,
                              double g_integral, double x) {
    RwRenewalCheck r;
    double acc = 0.0;
    for (double h : rw.ascending_heights) {
        if (h > x) {
            acc += g(h - x);
            ++r.tail_count;
        }
    }
    r.value = acc / static_cast<double>(rw.replicas) / step_tail(x);
    r.target = g_integral / rw.m;
    r.ratio = r.target != 0.0 ? r.value / r.target : 0.0;
    return r;
}

}  // namespace fluctlab
