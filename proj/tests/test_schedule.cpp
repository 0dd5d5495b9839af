#include <doctest.h>

#include "blseg/schedule.hpp"

using namespace blseg;

TEST_CASE("constant strategy emits alpha0 forever") {
    const AlphaSchedule s = AlphaSchedule::constant(1.0);
    for (int e : {0, 1, 10, 500}) {
        const LossWeights w = weights(s, e);
        CHECK(w.regional == 1.0);
        CHECK(w.boundary == 1.0);
    }
}

TEST_CASE("increase follows alpha0 + step*epoch up to the cap") {
    const AlphaSchedule s = AlphaSchedule::increase(0.01, 0.01, 1.0);
    CHECK(weights(s, 9).boundary == doctest::Approx(0.10));
    CHECK(weights(s, 9).regional == 1.0);
    CHECK(weights(s, 0).boundary == doctest::Approx(0.01));
    CHECK(weights(s, 99).boundary == doctest::Approx(1.0));
    CHECK(weights(s, 5000).boundary == doctest::Approx(1.0));  // capped at parity
}

TEST_CASE("rebalance splits the unit weight") {
    const AlphaSchedule s = AlphaSchedule::rebalance(0.01, 0.01, 0.99);
    const LossWeights w0 = weights(s, 0);
    CHECK(w0.regional == doctest::Approx(0.99));
    CHECK(w0.boundary == doctest::Approx(0.01));

    SUBCASE("weights sum to one at every epoch") {
        for (int e = 0; e < 300; ++e) {
            const LossWeights w = weights(s, e);
            CHECK(w.regional + w.boundary == doctest::Approx(1.0));
        }
    }
    SUBCASE("regional weight never reaches zero") {
        for (int e : {0, 50, 98, 99, 100, 100000}) CHECK(weights(s, e).regional > 0.0);
    }
}

TEST_CASE("alpha is nondecreasing for increase and rebalance") {
    for (const AlphaSchedule s : {AlphaSchedule::increase(), AlphaSchedule::rebalance()}) {
        double prev = -1.0;
        for (int e = 0; e < 200; ++e) {
            const double a = s.alpha(e);
            CHECK(a >= prev);
            prev = a;
        }
    }
}

TEST_CASE("invalid schedules are rejected") {
    AlphaSchedule s = AlphaSchedule::constant(-0.5);
    CHECK_THROWS_AS(weights(s, 0), InvalidSchedule);
    AlphaSchedule r = AlphaSchedule::rebalance(0.01, 0.01, 1.0);
    CHECK_THROWS_AS(weights(r, 0), InvalidSchedule);
    CHECK_THROWS_AS(weights(AlphaSchedule::increase(), -1), InvalidSchedule);
}
