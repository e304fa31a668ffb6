#pragma once
// Ladder-height asymptotics: the friendship identities linking the jump
// measure to the ladder measures (EAI and EA), heavy-tail asymptotes for the
// upward ladder tail, key-renewal and window (BRT) diagnostics against
// empirical ladder samples, small-x behavior, and the exact random-walk
// oracle.

#include <cstdint>
#include <functional>
#include <vector>

#include "fluctlab/measures.hpp"
#include "fluctlab/regvar.hpp"
#include "fluctlab/simulate.hpp"

namespace fluctlab {

struct SubordinatorTriplet {
    double kappa0 = 0.0;  // killing rate
    double d = 0.0;       // drift
    Fn1 tail;             // Levy tail of the ladder measure; null when zero
    double total = 0.0;   // tail mass at 0+, may be +inf
};

struct LadderTriplets {
    SubordinatorTriplet up;    // (kappa0, d, po)
    SubordinatorTriplet down;  // (kappa0_hat, d_hat, ne)
    Fn1 po_density;            // density of po, present iff down.d > 0
    double mu = 0.0;           // E H_hat_1 = d_hat + int y ne(dy)
};

// closed-form ladder objects for spectrally positive compound Poisson with
// negative drift, local time of the dual normalized so d_hat = 1:
// kappa0 = max(0, -E xi_1), po tail from the potential-measure convolution
// (exponential jumps get the classical risk-theory form), ne = 0
LadderTriplets ladder_closed_form(const CompoundPoissonDrift& f);

struct EaiResult {
    double value = 0.0;
    double stderr_ = 0.0;  // propagated from histogram bin errors; 0 for closed forms
    bool diverged = false;
};

// po tail at x from the potential measure of the dual ladder:
// int V(dy) Pi_tail(x + y); histogram V uses midpoint masses
EaiResult eai_rhs(const PotentialMeasure& vhat, const Fn1& pi_tail, double x,
                  const QuadratureSpec& spec = {});

struct EaBreakdown {
    double value = 0.0;
    double jump_term = 0.0;   // int_(x,inf) po(dy) ne_tail(y - x)
    double drift_term = 0.0;  // d_hat * po_density(x)
    double kill_term = 0.0;   // kappa0_hat * po_tail(x)
};

// jump-measure tail reconstructed from the ladder objects; throws a
// missing-density signal when down.d > 0 and po_density is absent
EaBreakdown ea_rhs(const LadderTriplets& lt, double x, const QuadratureSpec& spec = {});

// po tail asymptote Pi_tail_integrated(x) / mu for finite dual ladder mean
double tail_asymptote_finite_mean(const Fn1& pi_tail_integrated, double mu, double x);

// po tail asymptote Pi_tail(x) / kappa0_hat when xi drifts to +inf
double tail_asymptote_killed(const Fn1& pi_tail, double kappa0_hat, double x);

// Karamata form x Pi_tail(x) / (alpha mu) for regularly varying tails of
// index -1-alpha; agrees with the integrated-tail asymptote in the limit
double corollary_rv_asymptote(const Fn1& pi_tail, double alpha, double mu, double x);

// pooled ladder increments recast as an empirical Levy tail with physical
// normalization: tail(x) = scale * #(samples > x)
struct EmpiricalTail {
    std::vector<double> sorted;
    double scale = 0.0;

    double tail(double x) const;
    long long count_above(double x) const;
    double mass_in(double a, double b) const;  // mass of (a, b]
};
EmpiricalTail empirical_po(const LadderIncrements& inc, double total_mass);

// largest decade [10^k, 10^(k+1)] still carrying at least min_tail samples
// beyond its upper edge; ok = false when no decade qualifies
struct DecadeChoice {
    double lo = 0.0, hi = 0.0;
    bool ok = false;
    long long tail_count = 0;
};
DecadeChoice top_sampled_decade(const EmpiricalTail& po, long long min_tail = 200);

struct KeyRenewalResult {
    double value = 0.0;   // (1/Pi_tail(x)) int g(y-x) po_sample(dy)
    double target = 0.0;  // (1/mu) int_0^inf g
    double ratio = 0.0;
    long long tail_count = 0;
    bool sparse = false;  // fewer than 30 samples beyond x
};
KeyRenewalResult key_renewal_limit(const EmpiricalTail& po, const Fn1& pi_tail, double mu,
                                   const Fn1& g, double g_integral, double x);

struct BrtResult {
    double ratio = 0.0;       // window mass over (z/mu) Pi_tail(x)
    double window_mass = 0.0; // po(x, x+z]
    double bound_lhs = 0.0;   // window mass / Pi_tail(x)
    double bound_rhs = 0.0;   // V_hat(z)
    bool bound_ok = true;
    long long count = 0;
    bool sparse = false;
};
BrtResult brt_window(const EmpiricalTail& po, const Fn1& pi_tail, double mu,
                     const PotentialMeasure& vhat, double x, double z);

enum class ZeroCase { drift_positive, finite_ne };

struct ZeroBehavior {
    bool hypothesis_ok = true;
    double po_index = 0.0;     // rv index of the po tail at 0
    double pi_index = 0.0;     // rv index of the jump tail at 0
    double limit_ratio = 0.0;  // finite_ne case: mean po_tail/pi_tail over the grid
    double limit_target = 0.0; // 1 / (|ne| + kappa0_hat)
    bool consistent = false;
};

// small-x behavior: with a dual drift the po index at 0 is one above the jump
// tail index (alpha in (0,1]); with finite ne mass the tails are proportional
ZeroBehavior zero_behavior_check(const LadderTriplets& lt, const Fn1& pi_tail, ZeroCase c,
                                 double x_lo, double x_hi);

struct RwOracleResult {
    double m = 0.0;             // |E Z_Nhat|, Nhat the first weak descending epoch
    double mean_descend = 0.0;  // E Z_Nhat as literally defined (nonpositive)
    double en_hat = 0.0;        // E Nhat, for the Wald cross-check m = |E X| E Nhat
    double sub_mass = 0.0;      // P(N < inf) estimate, N the strict ascending epoch
    long long no_ascend = 0;    // walks whose ascent was never reached
    long long n_descend = 0;    // walks whose descent was reached
    long long replicas = 0;
    std::vector<double> ascending_heights;  // Z_N over ascending walks
};

// exact random-walk fluctuation sample: strict ascending and weak descending
// first ladder epochs per walk; a walk is abandoned once it falls below the
// recovery barrier or exceeds n_max steps
RwOracleResult rw_ladder_oracle(const std::function<double(RngStream&)>& step, int n_max,
                                long long replicas, std::uint64_t seed,
                                double barrier = 40.0);

struct RwRenewalCheck {
    double value = 0.0;   // (1/step_tail(x)) E[g(Z_N - x); Z_N > x]
    double target = 0.0;  // (1/m) int_0^inf g
    double ratio = 0.0;
    long long tail_count = 0;
};
RwRenewalCheck rw_key_renewal(const RwOracleResult& rw, const Fn1& step_tail, const Fn1& g,
                              double g_integral, double x);

}  // namespace fluctlab
