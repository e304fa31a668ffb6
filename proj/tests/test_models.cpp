#include <cmath>
#include <complex>

#include "doctest.h"
#include "fluctlab/models.hpp"

using namespace fluctlab;

TEST_CASE("unit-jump compound Poisson exponent closes at lambda = pi") {
    CompoundPoissonDrift f{1.0, unit_jump(), 0.0};
    // Psi(l) = e^{il} - 1, so Psi(pi) = -2
    cdouble v = char_exponent(to_triplet(f), M_PI);
    CHECK(v.real() == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(v.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
}

TEST_CASE("stable exponent: symmetric closed form and conjugate symmetry") {
    for (double l : {0.3, 1.0, 4.0}) {
        cdouble v = stable_exponent(1.3, 0.7, 0.0, l);
        CHECK(v.real() == doctest::Approx(-0.7 * std::pow(l, 1.3)).epsilon(1e-12));
        CHECK(v.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
    cdouble p = stable_exponent(1.5, 1.0, 0.4, 2.0);
    cdouble m = stable_exponent(1.5, 1.0, 0.4, -2.0);
    CHECK(p.real() == doctest::Approx(m.real()).epsilon(1e-12));
    CHECK(p.imag() == doctest::Approx(-m.imag()).epsilon(1e-12));
}

TEST_CASE("characteristic exponents have nonpositive real part") {
    std::vector<ProcessFamily> fams = {
        Stable{0.7, 1.0, 0.5},
        BrownianDrift{1.0, 2.0},
        CompoundPoissonDrift{2.0, lomax_jump(1.5, 1.0), -1.0},
    };
    for (const auto& f : fams) {
        LevyTriplet t = to_triplet(f);
        for (double l : {0.1, 1.0, 10.0}) {
            cdouble v = char_exponent(t, l);
            CHECK(v.real() <= 1e-9);
            cdouble w = char_exponent(t, -l);
            CHECK(w.real() == doctest::Approx(v.real()).epsilon(1e-6));
            CHECK(w.imag() == doctest::Approx(-v.imag()).scale(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("triplet exponent reproduces the stable closed form") {
    Stable s{1.2, 1.0, 0.3};
    LevyTriplet t = to_triplet(s);
    for (double l : {0.5, 2.0}) {
        cdouble num = char_exponent(t, l);
        cdouble ref = stable_exponent(s.alpha, s.c, s.delta, l);
        CHECK(std::abs(num - ref) <= 1e-3 * std::abs(ref));
    }
}

TEST_CASE("positivity parameter hits the frozen corner values") {
    CHECK(positivity_param(1.5, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(positivity_param(0.7, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(positivity_param(1.5, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("norming sequence: stable is self-norming, Brownian is a quartile radius") {
    ScalingResult s = scaling_b(Stable{1.5, 2.0, 0.0}, 8.0);
    CHECK(std::string(s.method) == "closed_form");
    CHECK(s.b == doctest::Approx(std::pow(8.0, 1.0 / 1.5)).epsilon(1e-12));

    // P(|N(0, t)| > b) = 1/4  =>  b = sqrt(t) * z_{7/8}, z_{7/8} = 1.150349
    ScalingResult bm = scaling_b(BrownianDrift{0.0, 1.0}, 4.0, 5);
    CHECK(bm.b == doctest::Approx(2.0 * 1.150349).epsilon(0.02));
}

TEST_CASE("exact marginal sampler matches the compound Poisson mean") {
    CompoundPoissonDrift f{2.0, exp_jump(1.0), -0.5};
    RngStream rng(11);
    const double t = 5.0;
    double s = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) s += sample_marginal(f, t, rng);
    // E xi_t = t (drift + rate E J) = 5 (-0.5 + 2) = 7.5
    CHECK(s / n == doctest::Approx(7.5).epsilon(0.02));
}

TEST_CASE("family means cover the defined and undefined cases") {
    CHECK(family_mean(Stable{1.5, 1.0, 0.2}) == doctest::Approx(0.0));
    CHECK(std::isnan(family_mean(Stable{0.9, 1.0, 0.0})));
    CHECK(family_mean(BrownianDrift{-2.5, 1.0}) == doctest::Approx(-2.5));
    CHECK(family_mean(CompoundPoissonDrift{3.0, exp_jump(2.0), -1.0}) ==
          doctest::Approx(-1.0 + 3.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("domain-of-attraction deviation vanishes for a stable vs itself") {
    Stable s{1.5, 1.0, 0.0};
    DAResult r = da_limit_check(s, s, {0.5, 1.0, 2.0}, {10.0, 100.0});
    CHECK(r.max_deviation < 1e-9);
    CHECK(r.per_t.size() == 2);
}

TEST_CASE("spectral positivity looks at jump support only") {
    CHECK(spectrally_positive(CompoundPoissonDrift{1.0, exp_jump(2.0), -3.0}));
    CHECK(spectrally_positive(CompoundPoissonDrift{1.0, lomax_jump(1.5, 1.0), 0.0}));
    CHECK(!spectrally_positive(CompoundPoissonDrift{1.0, pareto_sym_jump(0.7, 1.0), 0.0}));
}
