#include <cmath>

#include "doctest.h"
#include "fluctlab/exponents.hpp"

using namespace fluctlab;

namespace {

// E1(x) for small x via the alternating series -gamma - log x + sum (-x)^k/(k k!)
double expint_e1(double x) {
    const double gamma = 0.57721566490153286;
    double s = -gamma - std::log(x), term = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= -x / k;
        s -= term / k;
    }
    return s;
}

}  // namespace

TEST_CASE("erfcx agrees with erfc and its large-z asymptote") {
    for (double z : {0.1, 0.5, 1.0, 3.0}) {
        CHECK(erfcx(z) * std::exp(-z * z) == doctest::Approx(std::erfc(z)).epsilon(1e-12));
    }
    // erfcx(z) ~ 1/(z sqrt(pi))
    CHECK(erfcx(50.0) * 50.0 * std::sqrt(M_PI) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("one-sided stable cdf at alpha = 1/2 is the Levy law") {
    // E e^{-l S} = e^{-sqrt(l)}  =>  P(S <= z) = erfc(1 / (2 sqrt(z)))
    for (double z : {0.25, 1.0, 4.0}) {
        CHECK(positive_stable_cdf(0.5, z) ==
              doctest::Approx(std::erfc(0.5 / std::sqrt(z))).epsilon(1e-6));
    }
}

TEST_CASE("Fristedt ratio oracles: subordinator, Brownian, symmetric stable") {
    // ladder exponent of a stable subordinator is l^alpha, so the q = 0 ratio
    // at (3, 1.5) is 2^alpha
    MarginalLaw sub = marginal_from_subordinator(stable_subordinator_law(0.6));
    CHECK(fristedt_phi_ratio(sub, 0.0, 3.0, 1.5) ==
          doctest::Approx(std::pow(2.0, 0.6)).epsilon(1e-6));

    // BM ladder exponent: kappa(q, l) = sqrt(2q) + l up to normalization;
    // tolerance set by the fixed geometric dt/t grid, not the formula
    MarginalLaw bm = brownian_marginal();
    CHECK(fristedt_phi_ratio(bm, 1.0, 1.0, 2.0) ==
          doctest::Approx((std::sqrt(2.0) + 1.0) / (std::sqrt(2.0) + 2.0)).epsilon(1e-3));

    // symmetric stable: kappa(0, l) = l^{alpha rho} = l^{alpha/2}
    MarginalLaw ss = symmetric_stable_marginal(1.2, 1.0);
    CHECK(fristedt_phi_ratio(ss, 0.0, 2.0, 1.0) ==
          doctest::Approx(std::pow(2.0, 0.6)).epsilon(1e-4));
}

TEST_CASE("G1 of a pure drift is an exponential integral") {
    // sigma_t = 3t: G1(y) = int_{1/(3y)}^inf e^-t dt / t = E1(1/(3y)); the
    // indicator edge falls between grid nodes, so expect grid-level error
    SubordinatorLaw law = drift_subordinator_law(3.0);
    for (double y : {10.0, 100.0}) {
        CHECK(g1_function(law, y) == doctest::Approx(expint_e1(1.0 / (3.0 * y))).epsilon(2e-3));
    }
}

TEST_CASE("G2 of the unit-rate Poisson subordinator below the first jump") {
    // P(sigma_t <= x) = e^-t for x < 1: G2(x) = int dt/t (1 - e^-t) e^-t = log 2
    SubordinatorLaw law = poisson_subordinator_law(1.0);
    CHECK(g2_function(law, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("kernel transforms reproduce the exact exponent") {
    // exp(hat-G1(theta)) = 1 + phi(theta) and exp(-hat-G2lap(theta)) = phi/(1+phi)
    std::vector<SubordinatorLaw> laws = {poisson_subordinator_law(1.0),
                                         gamma_subordinator_law(2.0, 0.5)};
    for (const auto& law : laws) {
        for (double th : {0.25, 0.7, 1.0, 4.0}) {
            const double phi = law.phi(th);
            CHECK(std::exp(g1_mellin(law, th)) == doctest::Approx(1.0 + phi).epsilon(0.01));
            CHECK(std::exp(-g2_laplace(law, th)) ==
                  doctest::Approx(phi / (1.0 + phi)).epsilon(0.01));
        }
    }
}

TEST_CASE("mean recovery from G2 and drift recovery from G1") {
    RecoveryResult mean = mean_from_g2(poisson_subordinator_law(1.0));
    CHECK(mean.value == doctest::Approx(1.0).epsilon(0.02));
    CHECK(mean.spread < 0.05);

    RecoveryResult drift = drift_from_g1(drift_subordinator_law(3.0));
    CHECK(drift.value == doctest::Approx(3.0).epsilon(0.03));
    CHECK(drift.spread < 0.05);
}

TEST_CASE("exponent rebuilt from a triplet matches the direct formula") {
    // rate-1 compound Poisson subordinator with Exp(2) jumps plus drift 1/2:
    // phi(l) = l/2 + l / (2 + l)
    CompoundPoissonDrift cp{1.0, exp_jump(2.0), 0.5};
    LevyTriplet t = to_triplet(cp);
    CHECK(phi_from_triplet(t, 1.0) == doctest::Approx(0.5 + 1.0 / 3.0).epsilon(1e-4));
    CHECK(phi_from_triplet(t, 4.0) == doctest::Approx(2.0 + 4.0 / 6.0).epsilon(1e-4));
}

TEST_CASE("gamma subordinator law is internally consistent") {
    SubordinatorLaw law = gamma_subordinator_law(2.0, 0.5);
    // phi(l) = shape log(1 + scale l), mean = shape scale
    CHECK(law.phi(3.0) == doctest::Approx(2.0 * std::log(2.5)).epsilon(1e-12));
    CHECK(law.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law.lap(2.0, 3.0) == doctest::Approx(std::exp(-2.0 * law.phi(3.0))).epsilon(1e-12));
}
