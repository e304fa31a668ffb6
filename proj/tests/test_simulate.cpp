#include <cmath>

#include "doctest.h"
#include "fluctlab/asymptotics.hpp"
#include "fluctlab/simulate.hpp"

using namespace fluctlab;

namespace {

CompoundPoissonDrift cl_family() {
    // rate 1, Exp(2) jumps, drift -1: mean -1/2, creeping dual, everything closed
    return CompoundPoissonDrift{1.0, exp_jump(2.0), -1.0};
}

}  // namespace

TEST_CASE("sampled paths keep time order and a true running supremum") {
    RngStream rng(3);
    for (const ProcessFamily& f :
         {ProcessFamily(BrownianDrift{0.5, 1.0}), ProcessFamily(cl_family())}) {
        Path p = sample_path(f, 10.0, 0.05, rng);
        REQUIRE(p.times.size() == p.values.size());
        REQUIRE(p.times.size() == p.sup_values.size());
        double sup = 0.0;
        for (size_t i = 0; i < p.times.size(); ++i) {
            if (i) CHECK(p.times[i] >= p.times[i - 1]);
            sup = std::max(sup, p.values[i]);
            CHECK(p.sup_values[i] == doctest::Approx(sup).epsilon(1e-12));
        }
        CHECK(p.times.back() == doctest::Approx(10.0));
    }
}

TEST_CASE("ladder extraction is strictly increasing from the origin") {
    RngStream rng(4);
    Path p = sample_path(BrownianDrift{0.0, 1.0}, 5.0, 0.01, rng);
    LadderSample ls = extract_ladders(p);
    REQUIRE(!ls.heights.empty());
    CHECK(ls.epochs.front() == doctest::Approx(0.0));
    for (size_t i = 1; i < ls.heights.size(); ++i) {
        CHECK(ls.heights[i] > ls.heights[i - 1]);
        CHECK(ls.epochs[i] >= ls.epochs[i - 1]);
    }

    Path down;
    down.times = {0.0, 1.0, 2.0};
    down.values = {0.0, -1.0, -2.0};
    down.sup_values = {0.0, 0.0, 0.0};
    LadderSample only_origin = extract_ladders(down);
    CHECK(only_origin.heights.size() == 1);
}

TEST_CASE("unit-jump passage is exact: deterministic split at the barrier") {
    // jumps of size one from zero: passage over r = 2.5 happens on the third
    // jump with overshoot exactly 0.5 and prior supremum exactly 2
    CompoundPoissonDrift f{1.0, unit_jump(), 0.0};
    RngStream rng(5);
    for (int i = 0; i < 50; ++i) {
        auto rec = first_passage(f, 2.5, 0.0, 1e6, rng);
        REQUIRE(rec.has_value());
        CHECK(rec->overshoot == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rec->undershoot == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rec->prior_sup == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(!rec->discretized);
        CHECK(rec->T > 0.0);
    }
}

TEST_CASE("Gaussian passage records are discretized and internally consistent") {
    BrownianDrift f{0.0, 1.0};
    RngStream rng(6);
    int found = 0;
    for (int i = 0; i < 40; ++i) {
        auto rec = first_passage(f, 3.0, 1e-3, 1e5, rng);
        if (!rec) continue;
        ++found;
        CHECK(rec->discretized);
        CHECK(rec->overshoot >= 0.0);
        CHECK(rec->prior_sup <= 3.0);
        CHECK(rec->undershoot == doctest::Approx(3.0 - rec->prior_sup).epsilon(1e-9));
    }
    CHECK(found == 40);  // recurrent process always crosses
}

TEST_CASE("a negative-drift process can miss the barrier") {
    BrownianDrift f{-1.0, 0.1};
    RngStream rng(7);
    auto rec = first_passage(f, 5.0, 1e-2, 10.0, rng);
    CHECK(!rec.has_value());
}

TEST_CASE("pooled ladder jumps reproduce the closed ladder tail") {
    CompoundPoissonDrift f = cl_family();
    LadderTriplets lt = ladder_closed_form(f);
    LadderIncrements inc = ladder_increments(f, 40.0, 20000, 21);
    REQUIRE(inc.sizes.size() > 1000);
    EmpiricalTail emp = empirical_po(inc, lt.up.total);
    for (double x : {0.5, 1.0}) {
        CHECK(emp.tail(x) == doctest::Approx(lt.up.tail(x)).epsilon(0.10));
    }
    // one ladder jump per path on average: up.total / up.kappa0 = 1
    CHECK(inc.mean_per_path == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("dual potential measure: closed form and histogram agree") {
    CompoundPoissonDrift f = cl_family();
    PotentialMeasure cf = potential_measure_dual(f, 100.0, 0.01, 1, 22);
    CHECK(cf.closed_form);
    CHECK(cf.kappa0 == doctest::Approx(0.0));
    CHECK(cf.atom0 == doctest::Approx(0.0));
    // unkilled unit-drift dual ladder: V-hat is Lebesgue measure
    CHECK(cf.mass_upto(2.0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::isinf(cf.total_mass));

    PotentialMeasure mc = potential_measure_dual(f, 100.0, 0.01, 4000, 23, 8.0, 64, true);
    CHECK(!mc.closed_form);
    CHECK(mc.valid);
    CHECK(mc.mass_upto(2.0) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(mc.mass_upto(6.0) == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("dual family flips the jump tails") {
    CompoundPoissonDrift f = cl_family();
    ProcessFamily d = dual_family(f);
    const auto& dc = std::get<CompoundPoissonDrift>(d);
    CHECK(dc.drift == doctest::Approx(1.0));
    CHECK(dc.rate == doctest::Approx(1.0));
    CHECK(!dc.jumps.tail_plus);
    REQUIRE(dc.jumps.tail_minus);
    CHECK(dc.jumps.tail_minus(0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("Laplace machinery: jump transform, exponent root") {
    CHECK(jump_laplace(exp_jump(2.0), 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(jump_laplace(unit_jump(), 0.7) == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));

    CompoundPoissonDrift f = cl_family();
    // log E e^{-l xi_1} = l - 1 + 2/(2+l); zero at l = 0 only, dual unkilled
    CHECK(laplace_exponent(f, 1.0) ==
          doctest::Approx(1.0 - 1.0 + 2.0 / 3.0 - 0.0).epsilon(1e-9));
    CHECK(dual_killing_rate(f) == doctest::Approx(0.0));
}
