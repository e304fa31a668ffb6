#include "fluctlab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fluctlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void push_vertex(Path& p, double t, double x) {
    p.times.push_back(t);
    p.values.push_back(x);
    double s = p.sup_values.empty() ? x : std::max(p.sup_values.back(), x);
    p.sup_values.push_back(s);
}

Path grid_increment_path(double horizon, double dt,
                         const std::function<double(double)>& draw) {
    Path p;
    push_vertex(p, 0.0, 0.0);
    double x = 0.0;
    double t = 0.0;
    while (t < horizon - 1e-12 * horizon) {
        double step = std::min(dt, horizon - t);
        x += draw(step);
        t += step;
        push_vertex(p, t, x);
    }
    return p;
}

}  // namespace

Path sample_path(const ProcessFamily& f, double horizon, double dt, RngStream& rng) {
    if (horizon <= 0.0 || dt <= 0.0) throw std::invalid_argument("sample_path: need horizon > 0, dt > 0");
    if (const auto* bm = std::get_if<BrownianDrift>(&f)) {
        return grid_increment_path(horizon, dt, [&](double h) {
            return bm->mu * h + bm->sigma * std::sqrt(h) * rng.normal();
        });
    }
    if (const auto* st = std::get_if<Stable>(&f)) {
        StableSampler sampler(st->alpha, st->c, st->delta);
        return grid_increment_path(horizon, dt, [&](double h) { return sampler.draw(rng, h); });
    }
    const auto& cp = std::get<CompoundPoissonDrift>(f);
    Path p;
    push_vertex(p, 0.0, 0.0);
    double t = 0.0;
    double x = 0.0;
    double next_grid = dt;
    double next_event = cp.rate > 0.0 ? rng.exponential(cp.rate) : kInf;
    while (true) {
        double t_next = std::min({next_grid, next_event, horizon});
        x += cp.drift * (t_next - t);
        t = t_next;
        if (t >= horizon) {
            push_vertex(p, horizon, x);
            break;
        }
        if (t == next_event) {
            push_vertex(p, t, x);  // left limit before the jump
            x += cp.jumps.sample(rng);
            push_vertex(p, t, x);
            next_event = t + rng.exponential(cp.rate);
            if (t == next_grid) next_grid += dt;
        } else {
            push_vertex(p, t, x);
            next_grid += dt;
        }
    }
    return p;
}

std::optional<PassageRecord> first_passage(const ProcessFamily& f, double r, double dt,
                                           double t_cap, RngStream& rng) {
    if (r <= 0.0) throw std::invalid_argument("first_passage: need r > 0");
    PassageRecord rec;
    rec.r = r;

    if (const auto* cp = std::get_if<CompoundPoissonDrift>(&f)) {
        // exact event-driven walk; passage by creeping (drift segment reaching
        // r) has overshoot and undershoot both zero
        double t = 0.0;
        double x = 0.0;
        double s = 0.0;
        while (t < t_cap) {
            double wait = cp->rate > 0.0 ? rng.exponential(cp->rate) : kInf;
            double t_next = std::min(t + wait, t_cap);
            if (cp->drift > 0.0) {
                double x_end = x + cp->drift * (t_next - t);
                if (x_end > r) {
                    rec.T = t + (r - x) / cp->drift;
                    rec.overshoot = 0.0;
                    rec.undershoot = 0.0;
                    rec.prior_sup = r;
                    return rec;
                }
                s = std::max(s, x_end);
                x = x_end;
            } else {
                x += cp->drift * (t_next - t);
            }
            t = t_next;
            if (t >= t_cap) break;
            x += cp->jumps.sample(rng);
            if (x > r) {
                rec.T = t;
                rec.overshoot = x - r;
                rec.undershoot = r - s;
                rec.prior_sup = s;
                return rec;
            }
            s = std::max(s, x);
        }
        return std::nullopt;
    }

    double alpha = 2.0;
    double cscale = 1.0;
    double drift = 0.0;
    std::function<double(double)> draw;
    if (const auto* bm = std::get_if<BrownianDrift>(&f)) {
        alpha = 2.0;
        cscale = bm->sigma * bm->sigma;
        drift = bm->mu;
        draw = [&, bm](double h) { return bm->mu * h + bm->sigma * std::sqrt(h) * rng.normal(); };
    } else {
        const auto& st = std::get<Stable>(f);
        alpha = st.alpha;
        cscale = st.c;
        StableSampler sampler(st.alpha, st.c, st.delta);
        draw = [&rng, sampler](double h) { return sampler.draw(rng, h); };
    }

    rec.discretized = true;
    rec.dt = dt;
    double g_min = 1e-3 * r;
    double t = 0.0;
    double x = 0.0;
    double s = 0.0;
    while (t < t_cap) {
        double gap = std::max(r - x, g_min);
        double step = dt * std::pow(gap, alpha) / cscale;
        if (drift != 0.0) step = std::min(step, dt * gap / std::abs(drift));
        step = std::min(step, t_cap - t);
        x += draw(step);
        t += step;
        if (x > r) {
            rec.T = t;
            rec.overshoot = x - r;
            rec.undershoot = r - s;
            rec.prior_sup = s;
            return rec;
        }
        s = std::max(s, x);
    }
    return std::nullopt;
}

LadderSample extract_ladders(const Path& p) {
    LadderSample l;
    if (p.times.empty()) return l;
    l.epochs.push_back(p.times.front());
    l.heights.push_back(p.values.front());
    for (std::size_t i = 1; i < p.times.size(); ++i) {
        if (p.sup_values[i] > p.sup_values[i - 1]) {
            l.epochs.push_back(p.times[i]);
            l.heights.push_back(p.sup_values[i]);
        }
    }
    return l;
}

LadderIncrements ladder_increments(const CompoundPoissonDrift& f, double horizon,
                                   long long replicas, std::uint64_t seed, int burn_in) {
    LadderIncrements out;
    out.paths = replicas;
    out.horizon = horizon;
    if (f.rate <= 0.0) return out;
    long long total_records = 0;
    for (long long p = 0; p < replicas; ++p) {
        RngStream rng(seed, {0x1adULL, static_cast<std::uint64_t>(p)});
        double t = 0.0;
        double x = 0.0;
        double s = 0.0;
        int records = 0;
        while (true) {
            double wait = rng.exponential(f.rate);
            t += wait;
            if (t > horizon) break;
            x += f.drift * wait;
            if (f.drift > 0.0) s = std::max(s, x);
            x += f.jumps.sample(rng);
            if (x > s) {
                if (records >= burn_in) out.sizes.push_back(x - s);
                s = x;
                ++records;
            }
        }
        total_records += records;
    }
    out.mean_per_path = replicas > 0 ? static_cast<double>(total_records) / replicas : 0.0;
    return out;
}

double PotentialMeasure::mass_upto(double z) const {
    if (z <= 0.0) return 0.0;
    if (closed_form) {
        if (atom0 > 0.0) return atom0;
        if (kappa0 > 0.0) return -std::expm1(-kappa0 * z) / (kappa0 * d_hat);
        return z / d_hat;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        if (z >= b) {
            acc += masses[i];
        } else if (z > a) {
            acc += masses[i] * (z - a) / (b - a);
            break;
        } else {
            break;
        }
    }
    return acc;
}

double jump_laplace(const JumpLaw& j, double l) {
    if (j.laplace) return j.laplace(l);
    double acc = 0.0;
    for (const auto& [pos, prob] : j.atoms) acc += prob * std::exp(-l * pos);
    if (j.tail_plus) {
        double mass = j.tail_plus(1e-14);
        QuadResult q = integrate_log([&](double x) { return std::exp(-l * x) * j.tail_plus(x); },
                                     1e-14, std::max(60.0 / l, 60.0));
        acc += mass - l * q.value;
    }
    if (j.tail_minus) {
        // E e^{lY} against the negative part; diverges when the tail is not
        // exponentially dominated, reported as +inf
        double y_hi = 700.0 / std::max(l, 1e-6);
        if (j.tail_minus(y_hi) * std::exp(std::min(l * y_hi, 700.0)) > 1e-8) return kInf;
        double mass = j.tail_minus(1e-14);
        QuadResult q = integrate_log([&](double y) { return std::exp(l * y) * j.tail_minus(y); },
                                     1e-14, y_hi);
        acc += mass + l * q.value;
    }
    return acc;
}

double laplace_exponent(const CompoundPoissonDrift& f, double lambda) {
    double jl = f.rate > 0.0 ? jump_laplace(f.jumps, lambda) : 1.0;
    return -f.drift * lambda + f.rate * (jl - 1.0);
}

double dual_killing_rate(const CompoundPoissonDrift& f) {
    double mean = family_mean(ProcessFamily{f});
    if (!(mean > 0.0)) return 0.0;  // xi drifts down or oscillates: dual ladder unkilled
    double hi = 1.0;
    while (laplace_exponent(f, hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("dual_killing_rate: no positive root found");
    }
    return find_root([&](double l) { return laplace_exponent(f, l); }, 1e-12, hi, 1e-13);
}

ProcessFamily dual_family(const ProcessFamily& f) {
    if (const auto* st = std::get_if<Stable>(&f)) return Stable{st->alpha, st->c, -st->delta};
    if (const auto* bm = std::get_if<BrownianDrift>(&f)) return BrownianDrift{-bm->mu, bm->sigma};
    const auto& cp = std::get<CompoundPoissonDrift>(f);
    JumpLaw m;
    m.tail_plus = cp.jumps.tail_minus;
    m.tail_minus = cp.jumps.tail_plus;
    for (const auto& [pos, prob] : cp.jumps.atoms) m.atoms.emplace_back(-pos, prob);
    auto base = cp.jumps.sample;
    m.sample = [base](RngStream& rng) { return -base(rng); };
    m.mean = -cp.jumps.mean;
    return CompoundPoissonDrift{cp.rate, std::move(m), -cp.drift};
}

PotentialMeasure potential_measure_dual(const ProcessFamily& f, double horizon, double dt,
                                        long long replicas, std::uint64_t seed, double y_max,
                                        int bins, bool force_histogram) {
    PotentialMeasure v;
    const auto* cp = std::get_if<CompoundPoissonDrift>(&f);
    const auto* bm = std::get_if<BrownianDrift>(&f);

    if (cp) {
        v.kappa0 = dual_killing_rate(*cp);
    } else if (bm) {
        // positive root of the dual Laplace exponent sigma^2 l^2 / 2 - mu l
        v.kappa0 = bm->mu > 0.0 ? 2.0 * bm->mu / (bm->sigma * bm->sigma) : 0.0;
    }
    v.total_mass = v.kappa0 > 0.0 ? 1.0 / v.kappa0 : kInf;

    bool creeping_dual = (cp && spectrally_positive(*cp) && cp->drift < 0.0) || bm;
    if (creeping_dual && !force_histogram) {
        v.closed_form = true;
        return v;
    }
    if (!creeping_dual) {
        // covered-levels estimator needs a continuous dual supremum
        v.valid = false;
        return v;
    }

    v.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) v.edges[i] = y_max * i / bins;
    std::vector<double> sum(bins, 0.0), sumsq(bins, 0.0);
    ProcessFamily dual = dual_family(f);
    const auto* dcp = std::get_if<CompoundPoissonDrift>(&dual);
    for (long long rep = 0; rep < replicas; ++rep) {
        RngStream rng(seed, {0xd0aULL, static_cast<std::uint64_t>(rep)});
        double s = 0.0;
        if (dcp) {
            double t = 0.0, x = 0.0;
            while (true) {
                double wait = dcp->rate > 0.0 ? rng.exponential(dcp->rate) : kInf;
                double t_next = std::min(t + wait, horizon);
                x += dcp->drift * (t_next - t);
                s = std::max(s, x);
                t = t_next;
                if (t >= horizon) break;
                x += dcp->jumps.sample(rng);
                s = std::max(s, x);
            }
        } else {
            const auto& b = std::get<BrownianDrift>(dual);
            double x = 0.0;
            long long n = static_cast<long long>(std::ceil(horizon / dt));
            for (long long k = 0; k < n; ++k) {
                x += b.mu * dt + b.sigma * std::sqrt(dt) * rng.normal();
                s = std::max(s, x);
            }
        }
        for (int i = 0; i < bins; ++i) {
            if (s <= v.edges[i]) break;
            double c = std::min(s, v.edges[i + 1]) - v.edges[i];
            sum[i] += c;
            sumsq[i] += c * c;
        }
    }
    v.masses.resize(bins);
    v.stderrs.resize(bins);
    for (int i = 0; i < bins; ++i) {
        double mean = sum[i] / replicas;
        v.masses[i] = mean;
        double var = replicas > 1 ? (sumsq[i] - replicas * mean * mean) / (replicas - 1) : 0.0;
        v.stderrs[i] = std::sqrt(std::max(var, 0.0) / replicas);
    }
    return v;
}

}  // namespace fluctlab
