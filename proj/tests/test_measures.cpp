#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fluctlab/measures.hpp"

using namespace fluctlab;

TEST_CASE("exponential measure tails and balance are exact") {
    LevyMeasure m = exponential_measure(2.0, 1.0, 1.0, 1.0);
    CHECK(m.tail_plus(0.7) == doctest::Approx(2.0 * std::exp(-0.7)).epsilon(1e-12));
    CHECK(m.tail_minus(0.7) == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));
    TailBalance tb = tail_balance(m, 3.0);
    CHECK(tb.defined);
    CHECK(tb.p_hat == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(tb.p_hat + tb.q_hat == doctest::Approx(1.0));
}

TEST_CASE("integrated Lomax tail has the closed value") {
    LevyMeasure m = lomax_measure(1.0, 2.5, 1.0);
    // int_x^inf (1+z)^-2.5 dz = (2/3)(1+x)^-1.5
    TailIntegral ti = integrated_tail(m, 1.0);
    CHECK(ti.finite);
    CHECK(ti.value == doctest::Approx(2.0 / 3.0 * std::pow(2.0, -1.5)).epsilon(1e-4));
    IntegratedTail it = make_integrated_tail(m);
    CHECK(it.finite);
    CHECK(it.value(1.0) == doctest::Approx(ti.value).epsilon(1e-9));
    CHECK(it.value(0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("integrated tail flags divergence below index 1") {
    LevyMeasure m = lomax_measure(1.0, 0.8, 1.0);
    CHECK(!integrated_tail(m, 1.0).finite);
    IntegratedTail it = make_integrated_tail(m);
    CHECK(!it.finite);
    CHECK_THROWS_AS(it.value(1.0), std::runtime_error);
}

TEST_CASE("pareto measure is flat below xmin") {
    LevyMeasure m = pareto_measure(0.5, 1.5, 2.0, true);
    CHECK(m.tail_plus(1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.tail_plus(4.0) == doctest::Approx(0.5 * std::pow(2.0, -1.5)).epsilon(1e-12));
    CHECK(m.tail_minus(4.0) == doctest::Approx(m.tail_plus(4.0)).epsilon(1e-12));
}

TEST_CASE("atom measure carries its point mass in the tails") {
    LevyMeasure m = atom_measure(0.5, 2.0);
    CHECK(m.tail_plus(1.9) == doctest::Approx(0.5));
    CHECK(m.tail_plus(2.1) == doctest::Approx(0.0));
    RngStream r(1);
    for (int i = 0; i < 10; ++i) CHECK(m.draw_jump(r) == doctest::Approx(2.0));
}

TEST_CASE("small-jump integrability matches the tail index") {
    CHECK(small_jumps_integrable(power_small_measure(0.5)));
    CHECK(!small_jumps_integrable(power_small_measure(1.5)));
}

TEST_CASE("mean of small jumps integrates the truncated measure") {
    // one-sided Exp(1) intensity: int_0^1 x e^-x dx = 1 - 2/e
    LevyMeasure m = exponential_measure(1.0, 1.0);
    CHECK(mean_small_jumps(m) == doctest::Approx(1.0 - 2.0 / M_E).epsilon(1e-6));
    LevyMeasure sym = exponential_measure(1.0, 1.0, 1.0, 1.0);
    CHECK(mean_small_jumps(sym) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("long-tailed verdicts separate Lomax from exponential") {
    LevyMeasure heavy = lomax_measure(1.0, 3.0, 1.0);
    LongTailResult lt = long_tailed_test([&heavy](double x) { return heavy.tail_plus(x); });
    CHECK(lt.verdict);

    LevyMeasure light = exponential_measure(1.0, 1.0);
    LongTailResult le = long_tailed_test([&light](double x) { return light.tail_plus(x); },
                                         {20.0, 40.0, 80.0, 160.0});
    CHECK(!le.verdict);
}

TEST_CASE("conditioned jump draws reproduce the exponential mean") {
    LevyMeasure m = exponential_measure(1.0, 2.0);
    RngStream r(7);
    double s = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) s += m.draw_jump(r);
    CHECK(s / n == doctest::Approx(0.5).epsilon(0.03));
}
