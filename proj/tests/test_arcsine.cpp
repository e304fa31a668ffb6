#include <cmath>

#include "doctest.h"
#include "fluctlab/arcsine.hpp"

using namespace fluctlab;

TEST_CASE("symmetric undershoot density is the classical arc-sine law") {
    CHECK(qbeta_pdf(0.5, 0.5) == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
    CHECK(qbeta_cdf(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(qbeta_cdf(0.5, 0.0) == doctest::Approx(0.0));
    CHECK(qbeta_cdf(0.5, 1.0) == doctest::Approx(1.0));
    CHECK(qbeta_cdf(0.3, 1.5) == doctest::Approx(1.0));
    CHECK(qbeta_cdf(0.3, -0.5) == doctest::Approx(0.0));
}

TEST_CASE("undershoot law integrates to one with mean 1 - beta") {
    for (double beta : {0.3, 0.5, 0.7}) {
        // truncation clips ~eps^beta of endpoint-singularity mass, so compare
        // the pdf integral against the cdf difference and only coarsely to 1
        QuadResult total = integrate([beta](double y) { return qbeta_pdf(beta, y); },
                                     1e-12, 1.0 - 1e-12);
        const double span = qbeta_cdf(beta, 1.0 - 1e-12) - qbeta_cdf(beta, 1e-12);
        CHECK(total.value == doctest::Approx(span).epsilon(1e-6));
        CHECK(total.value == doctest::Approx(1.0).epsilon(1e-3));
        QuadResult mean = integrate([beta](double y) { return y * qbeta_pdf(beta, y); },
                                    1e-12, 1.0 - 1e-12);
        CHECK(mean.value == doctest::Approx(1.0 - beta).epsilon(1e-3));
    }
}

TEST_CASE("joint density value and overshoot marginal are linked") {
    CHECK(pbeta_joint_pdf(0.5, 0.5, 0.5) ==
          doctest::Approx(0.5 / M_PI * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(overshoot_limit_pdf(0.5, 1.0) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));

    // integrating the joint density over u in (0,1) gives the w-marginal, up
    // to the clipped (1-u)^(beta-1) endpoint mass of order eps^beta
    const double beta = 0.3;
    for (double w : {0.5, 2.0}) {
        QuadResult q = integrate([beta, w](double u) { return pbeta_joint_pdf(beta, u, w); },
                                 1e-12, 1.0 - 1e-12);
        CHECK(q.value == doctest::Approx(overshoot_limit_pdf(beta, w)).epsilon(1e-3));
    }
}

TEST_CASE("overshoot cdf is normalized despite the fat tail") {
    CHECK(overshoot_limit_cdf(0.7, 1e8) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(overshoot_limit_cdf(0.7, 0.0) == doctest::Approx(0.0));
    // cdf is the integral of the pdf
    QuadResult q = integrate([](double x) { return overshoot_limit_pdf(0.4, x); }, 1e-12, 3.0);
    CHECK(overshoot_limit_cdf(0.4, 3.0) == doctest::Approx(q.value).epsilon(1e-6));
}

TEST_CASE("KS fit accepts the true law and rejects a wrong one") {
    RngStream rng(17);
    std::vector<double> u(2000);
    for (auto& v : u) v = rng.u01();
    KsResult good = ks_fit(u, [](double x) { return std::min(std::max(x, 0.0), 1.0); });
    CHECK(good.pass);
    CHECK(good.p_value > 0.01);

    std::vector<double> u2 = u;
    for (auto& v : u2) v = v * v;  // square of uniform is not uniform
    KsResult bad = ks_fit(u2, [](double x) { return std::min(std::max(x, 0.0), 1.0); });
    CHECK(!bad.pass);
    CHECK(bad.p_value < 1e-6);

    CHECK_THROWS(ks_fit(std::vector<double>(10, 0.5), [](double x) { return x; }));
}

TEST_CASE("mean undershoot check is plain averaging of prior_sup over r") {
    std::vector<PassageRecord> recs(4);
    double sups[] = {0.2, 0.4, 0.6, 0.8};
    for (int i = 0; i < 4; ++i) {
        recs[i].r = 2.0;
        recs[i].prior_sup = 2.0 * sups[i];
    }
    MeanCheck mc = mean_undershoot_check(recs);
    CHECK(mc.value == doctest::Approx(0.5).epsilon(1e-12));
    // sum of squared deviations 0.2, n-1 variance over n samples
    CHECK(mc.stderr_ == doctest::Approx(std::sqrt(0.2 / 3.0 / 4.0)).epsilon(1e-9));
}

TEST_CASE("degenerate endpoints carry their limit points") {
    ArcSineLaw creep{1.0};
    CHECK(creep.degenerate());
    CHECK(creep.degenerate_point().first == doctest::Approx(0.0));
    CHECK(creep.degenerate_point().second == doctest::Approx(0.0));
    ArcSineLaw stick{0.0};
    CHECK(stick.degenerate());
    CHECK(stick.degenerate_point().first == doctest::Approx(1.0));
    CHECK(std::isinf(stick.degenerate_point().second));
    CHECK(!ArcSineLaw{0.5}.degenerate());
}

TEST_CASE("out-of-range parameters throw") {
    CHECK_THROWS(qbeta_pdf(1.5, 0.5));
    CHECK_THROWS(pbeta_joint_pdf(-0.1, 0.5, 0.5));
    CHECK_THROWS(overshoot_limit_pdf(0.0, 1.0));
}
