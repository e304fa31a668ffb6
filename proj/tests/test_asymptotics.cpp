#include <cmath>
#include <limits>

#include "doctest.h"
#include "fluctlab/asymptotics.hpp"

using namespace fluctlab;

namespace {

CompoundPoissonDrift cl_family() {
    return CompoundPoissonDrift{1.0, exp_jump(2.0), -1.0};
}

double cl_pi_tail(double x) { return std::exp(-2.0 * x); }

}  // namespace

TEST_CASE("closed ladder objects of the exponential family") {
    LadderTriplets lt = ladder_closed_form(cl_family());
    CHECK(lt.up.kappa0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lt.up.total == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(lt.up.d == doctest::Approx(0.0));
    CHECK(lt.down.d == doctest::Approx(1.0));
    CHECK(lt.down.kappa0 == doctest::Approx(0.0));
    CHECK(lt.mu == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : {0.1, 1.0, 3.0}) {
        CHECK(lt.up.tail(x) == doctest::Approx(0.5 * std::exp(-2.0 * x)).epsilon(1e-9));
    }
    REQUIRE(lt.po_density);
    CHECK(lt.po_density(1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("friendship identities close on the exponential family") {
    CompoundPoissonDrift f = cl_family();
    LadderTriplets lt = ladder_closed_form(f);
    PotentialMeasure vhat = potential_measure_dual(f, 100.0, 0.01, 1, 31);
    for (double x : {0.5, 1.0, 2.0}) {
        EaBreakdown ea = ea_rhs(lt, x);
        CHECK(ea.value == doctest::Approx(cl_pi_tail(x)).epsilon(1e-3));
        CHECK(ea.jump_term == doctest::Approx(0.0));
        CHECK(ea.kill_term == doctest::Approx(0.0));

        EaiResult eai = eai_rhs(vhat, cl_pi_tail, x);
        CHECK(!eai.diverged);
        CHECK(eai.value == doctest::Approx(lt.up.tail(x)).epsilon(0.01));
    }
}

TEST_CASE("Karamata and integrated-tail asymptotes agree on pure power tails") {
    const double alpha = 0.5, mu = 2.0;
    auto pi_tail = [alpha](double x) { return std::pow(x, -1.0 - alpha); };
    auto pi_int = [alpha](double x) { return std::pow(x, -alpha) / alpha; };
    for (double x : {10.0, 100.0}) {
        double a = tail_asymptote_finite_mean(pi_int, mu, x);
        double b = corollary_rv_asymptote(pi_tail, alpha, mu, x);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
        CHECK(a == doctest::Approx(std::pow(x, -0.5) / (0.5 * 2.0)).epsilon(1e-12));
    }
    CHECK(tail_asymptote_killed(pi_tail, 0.25, 10.0) ==
          doctest::Approx(std::pow(10.0, -1.5) / 0.25).epsilon(1e-12));
}

TEST_CASE("empirical tail bookkeeping on a hand sample") {
    LadderIncrements inc;
    inc.sizes = {1.0, 2.0, 3.0};
    inc.paths = 3;
    EmpiricalTail po = empirical_po(inc, 6.0);
    CHECK(po.scale == doctest::Approx(2.0));
    CHECK(po.tail(0.5) == doctest::Approx(6.0));
    CHECK(po.tail(1.0) == doctest::Approx(4.0));
    CHECK(po.tail(2.5) == doctest::Approx(2.0));
    CHECK(po.tail(3.5) == doctest::Approx(0.0));
    CHECK(po.count_above(1.5) == 2);
    CHECK(po.mass_in(1.0, 3.0) == doctest::Approx(4.0));
}

TEST_CASE("top sampled decade walks down until the tail is populated") {
    LadderIncrements inc;
    // 300 samples in (1, 10], 250 beyond that decade's upper edge
    for (int i = 0; i < 300; ++i) inc.sizes.push_back(1.0 + 9.0 * (i + 1.0) / 300.0);
    for (int i = 0; i < 250; ++i) inc.sizes.push_back(10.5 + 9.0 * i / 250.0);
    inc.paths = 550;
    EmpiricalTail po = empirical_po(inc, 550.0);
    DecadeChoice d = top_sampled_decade(po, 200);
    CHECK(d.ok);
    CHECK(d.lo == doctest::Approx(1.0));
    CHECK(d.hi == doctest::Approx(10.0));
    CHECK(d.tail_count == 250);

    DecadeChoice none = top_sampled_decade(po, 100000);
    CHECK(!none.ok);
}

TEST_CASE("window bound holds for the exponential family sample") {
    CompoundPoissonDrift f = cl_family();
    LadderTriplets lt = ladder_closed_form(f);
    LadderIncrements inc = ladder_increments(f, 40.0, 20000, 33);
    EmpiricalTail emp = empirical_po(inc, lt.up.total);
    PotentialMeasure vhat = potential_measure_dual(f, 100.0, 0.01, 1, 34);
    for (double z : {0.5, 1.0}) {
        BrtResult b = brt_window(emp, cl_pi_tail, lt.mu, vhat, 1.0, z);
        REQUIRE(!b.sparse);
        CHECK(b.bound_ok);
        CHECK(b.bound_rhs == doctest::Approx(z).epsilon(1e-9));
        CHECK(b.ratio > 0.0);
    }
}

TEST_CASE("key renewal limit against the closed ladder sample") {
    CompoundPoissonDrift f = cl_family();
    LadderTriplets lt = ladder_closed_form(f);
    LadderIncrements inc = ladder_increments(f, 40.0, 40000, 35);
    EmpiricalTail emp = empirical_po(inc, lt.up.total);
    // po overshoot beyond x is Exp(2): value = po_tail(x) E e^{-U} = po_tail(x) * 2/3
    KeyRenewalResult kr = key_renewal_limit(emp, [&lt](double x) { return lt.up.tail(x); },
                                            lt.mu, [](double u) { return std::exp(-u); },
                                            1.0, 0.5);
    CHECK(!kr.sparse);
    CHECK(kr.target == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kr.value == doctest::Approx(2.0 / 3.0).epsilon(0.08));
}

TEST_CASE("zero behavior: dual drift lifts the po index by one") {
    LadderTriplets lt;
    lt.up.tail = [](double x) { return std::pow(x, -0.5); };
    lt.up.total = std::numeric_limits<double>::infinity();
    lt.down.d = 1.0;
    ZeroBehavior zb = zero_behavior_check(lt, [](double x) { return std::pow(x, -1.5); },
                                          ZeroCase::drift_positive, 1e-4, 1e-1);
    CHECK(zb.hypothesis_ok);
    CHECK(zb.po_index == doctest::Approx(-0.5).epsilon(0.02));
    CHECK(zb.pi_index == doctest::Approx(-1.5).epsilon(0.02));
    CHECK(zb.consistent);
}

TEST_CASE("zero behavior: finite downward mass makes the tails proportional") {
    LadderTriplets lt;
    lt.up.tail = [](double x) { return 2.5 * std::pow(x, -0.5); };
    lt.up.total = std::numeric_limits<double>::infinity();
    lt.down.d = 0.0;
    lt.down.total = 0.3;
    lt.down.kappa0 = 0.1;
    ZeroBehavior zb = zero_behavior_check(lt, [](double x) { return std::pow(x, -0.5); },
                                          ZeroCase::finite_ne, 1e-4, 1e-1);
    CHECK(zb.hypothesis_ok);
    CHECK(zb.limit_target == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(zb.limit_ratio == doctest::Approx(2.5).epsilon(0.01));
    CHECK(zb.consistent);
}

TEST_CASE("random-walk oracle: exponential control walk") {
    // steps Exp(1) - Exp(1/2): E X = -1, descent memoryless, m = 2 exactly
    auto step = [](RngStream& rng) {
        return rng.exponential(1.0) - rng.exponential(0.5);
    };
    RwOracleResult rw = rw_ladder_oracle(step, 4000, 100000, 41, 60.0);
    CHECK(rw.m == doctest::Approx(2.0).epsilon(0.03));
    double q = static_cast<double>(rw.ascending_heights.size()) /
               static_cast<double>(rw.replicas);
    CHECK(q == doctest::Approx(0.5).epsilon(0.02));
    // Wald: m = |E X| E Nhat
    CHECK(rw.en_hat * 1.0 == doctest::Approx(rw.m).epsilon(0.02));
}

TEST_CASE("random-walk oracle: heavy-tailed documented family") {
    // steps Lomax(3, 1) - Exp(1): E X = 1/2 - 1 = -1/2 and descent is again
    // memoryless below zero, so m = 1 exactly
    auto step = [](RngStream& rng) {
        double u = rng.u01();
        return (std::pow(u, -1.0 / 3.0) - 1.0) - rng.exponential(1.0);
    };
    RwOracleResult rw = rw_ladder_oracle(step, 6000, 100000, 42, 150.0);
    CHECK(rw.m == doctest::Approx(1.0).epsilon(0.03));
    CHECK(rw.sub_mass == doctest::Approx(0.5).epsilon(0.04));
    CHECK(rw.en_hat == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("random-walk key renewal on the control family") {
    auto step = [](RngStream& rng) {
        return rng.exponential(1.0) - rng.exponential(0.5);
    };
    RwOracleResult rw = rw_ladder_oracle(step, 4000, 200000, 43, 60.0);
    // ascending height is Exp(1) given finite, step tail (1/3) e^{-x}:
    // value = q e^{-x} E e^{-U} = 0.75 e^{-x} over (1/3) e^{-x}, ratio 1.5 exact
    auto tail = [](double x) { return std::exp(-x) / 3.0; };
    RwRenewalCheck kr = rw_key_renewal(rw, tail, [](double u) { return std::exp(-u); },
                                       1.0, 6.0);
    CHECK(kr.tail_count > 30);
    // target divides by the measured descending mean, so it is Monte Carlo too
    CHECK(kr.target == doctest::Approx(0.5).epsilon(0.02));
    CHECK(kr.ratio == doctest::Approx(1.5).epsilon(0.2));
}

TEST_CASE("missing density and bad arguments throw") {
    LadderTriplets lt;
    lt.up.tail = [](double x) { return std::exp(-x); };
    lt.down.d = 1.0;  // density required but absent
    CHECK_THROWS(ea_rhs(lt, 1.0));
    CHECK_THROWS(ea_rhs(lt, -1.0));
    CHECK_THROWS(tail_asymptote_finite_mean([](double) { return 1.0; }, 0.0, 1.0));
}
