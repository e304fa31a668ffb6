#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fluctlab/quadrature.hpp"

using namespace fluctlab;

TEST_CASE("gk15 integrates smooth functions") {
    double v = 0.0, e = 0.0;
    gk15([](double x) { return x * x; }, 0.0, 1.0, &v, &e);
    CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    gk15([](double x) { return std::sin(x); }, 0.0, M_PI, &v, &e);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("adaptive integrate hits analytic values") {
    auto g = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(g.converged);
    CHECK(g.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));

    // integrable endpoint singularity
    auto s = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("integrate_log covers wide Lomax tails") {
    auto r = integrate_log([](double x) { return std::pow(1.0 + x, -2.5); }, 1e-12, 1e8);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK_THROWS_AS(integrate_log([](double) { return 1.0; }, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("dtt_integral reproduces the Frullani value") {
    auto g = dtt_integral([](double t) { return std::exp(-t) - std::exp(-2.0 * t); });
    CHECK(g.value == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(!g.truncation_suspect);
    CHECK(g.head_fraction < 1e-3);
    CHECK(g.tail_fraction < 1e-3);
}

TEST_CASE("dtt_integral flags mass against the window edge") {
    // 1/t grows into the head cutoff, so the first cell dominates
    auto g = dtt_integral([](double t) { return 1.0 / t; });
    CHECK(g.truncation_suspect);
    CHECK(g.head_fraction > 1e-3);
}

TEST_CASE("alternating panel sums handle damped and slow envelopes") {
    double damped = sum_alternating_panels(
        [](double x) { return std::sin(x) * std::exp(-0.5 * x); }, 0.0, M_PI);
    CHECK(damped == doctest::Approx(0.8).epsilon(1e-6));

    // 1/x envelope never meets the panel cutoff, Euler averaging carries it
    double dirichlet = sum_alternating_panels(
        [](double x) { return std::sin(x) / x; }, 1e-12, M_PI);
    CHECK(dirichlet == doctest::Approx(M_PI / 2.0).epsilon(1e-6));
}

TEST_CASE("find_root brackets and bisects") {
    double r = find_root([](double x) { return std::cos(x); }, 0.0, 2.0);
    CHECK(r == doctest::Approx(M_PI / 2.0).epsilon(1e-10));
    CHECK_THROWS_AS(find_root([](double) { return 1.0; }, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("LogGridFn interpolates in log x and clamps outside") {
    LogGridFn g(0.1, 10.0, 64, [](double x) { return x * x; });
    CHECK(g(3.7) == doctest::Approx(3.7 * 3.7).epsilon(2e-3));
    CHECK(g(0.17) == doctest::Approx(0.17 * 0.17).epsilon(2e-3));
    CHECK(g(1e3) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(g(1e-3) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_THROWS_AS(LogGridFn(-1.0, 1.0, 8, [](double) { return 0.0; }), std::invalid_argument);
}
