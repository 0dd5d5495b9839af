#include <doctest.h>

#include <cmath>

#include "blseg/metrics.hpp"
#include "blseg/rng.hpp"
#include "oracles.hpp"

using namespace blseg;

namespace {

BinaryMask square(int n, int y0, int x0, int side) {
    BinaryMask m({n, n}, {1.0, 1.0});
    for (int y = y0; y < y0 + side; ++y)
        for (int x = x0; x < x0 + side; ++x) m.values[static_cast<std::size_t>(m.index(y, x))] = 1;
    return m;
}

} // namespace

TEST_CASE("dsc basics") {
    Rng rng(51);
    const BinaryMask g = oracle::random_mask(rng, {8, 8}, {1.0, 1.0}, 0.3);
    CHECK(dsc(g, g) == 1.0);

    BinaryMask a({1, 8}, {1.0, 1.0}), b({1, 8}, {1.0, 1.0});
    a.values[0] = a.values[1] = 1;
    b.values[4] = b.values[5] = 1;
    CHECK(dsc(a, b) == 0.0);

    // |P|=|G|=4, |P^G|=2 -> 0.5
    BinaryMask p({2, 4}, {1.0, 1.0}), q({2, 4}, {1.0, 1.0});
    for (int i = 0; i < 4; ++i) p.values[static_cast<std::size_t>(i)] = 1;
    for (int i = 2; i < 6; ++i) q.values[static_cast<std::size_t>(i)] = 1;
    CHECK(dsc(p, q) == 0.5);

    SUBCASE("empty-mask conventions") {
        BinaryMask e1({3, 3}, {1.0, 1.0}), e2({3, 3}, {1.0, 1.0});
        CHECK(dsc(e1, e2) == 1.0);
        e2.values[0] = 1;
        CHECK(dsc(e1, e2) == 0.0);
    }
    SUBCASE("symmetry") {
        const BinaryMask x = oracle::random_mask(rng, {7, 7}, {1.0, 1.0}, 0.4);
        const BinaryMask y = oracle::random_mask(rng, {7, 7}, {1.0, 1.0}, 0.4);
        CHECK(dsc(x, y) == dsc(y, x));
    }
}

TEST_CASE("hd95 basics") {
    SUBCASE("identical masks give zero") {
        Rng rng(52);
        const BinaryMask g = oracle::random_mask(rng, {9, 9}, {1.0, 1.0}, 0.3);
        CHECK(hd95(g, g) == 0.0);
    }
    SUBCASE("single-pixel masks one pixel apart") {
        BinaryMask a({5, 5}, {1.0, 1.0}), b({5, 5}, {1.0, 1.0});
        a.values[static_cast<std::size_t>(a.index(1, 1))] = 1;
        b.values[static_cast<std::size_t>(b.index(1, 2))] = 1;
        CHECK(hd95(a, b) == 1.0);
    }
    SUBCASE("1-pixel-shifted square is exactly 1.0") {
        const BinaryMask a = square(12, 4, 4, 4);
        const BinaryMask b = square(12, 4, 5, 4);
        CHECK(hd95(a, b) == 1.0);
    }
    SUBCASE("empty mask returns the domain diagonal, flagged") {
        BinaryMask e({5, 5}, {2.0, 1.0});
        BinaryMask g({5, 5}, {2.0, 1.0});
        g.values[12] = 1;
        bool sentinel = false;
        const double v = hd95(e, g, &sentinel);
        CHECK(sentinel);
        CHECK(v == doctest::Approx(std::sqrt(64.0 + 16.0)));
    }
    SUBCASE("symmetry and oracle agreement on random pairs") {
        Rng rng(53);
        for (int t = 0; t < 15; ++t) {
            const Spacing sp{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
            const BinaryMask a = oracle::random_mask(rng, {10, 9}, sp, rng.uniform(0.1, 0.5));
            const BinaryMask b = oracle::random_mask(rng, {10, 9}, sp, rng.uniform(0.1, 0.5));
            const double ab = hd95(a, b);
            CHECK(ab == hd95(b, a));
            CHECK(std::abs(ab - oracle::brute_hd95(a, b)) <= 1e-9);
        }
    }
    SUBCASE("hd95 never exceeds the exact Hausdorff distance") {
        Rng rng(54);
        for (int t = 0; t < 10; ++t) {
            const BinaryMask a = oracle::random_mask(rng, {8, 8}, {1.0, 1.0}, 0.3);
            const BinaryMask b = oracle::random_mask(rng, {8, 8}, {1.0, 1.0}, 0.3);
            // exact Hausdorff via the same directed sets at p=100
            const auto ba = oracle::brute_boundary(a);
            const auto bb = oracle::brute_boundary(b);
            if (ba.empty() || bb.empty()) continue;
            auto directed_max = [&](const std::vector<std::int64_t>& from,
                                    const std::vector<std::int64_t>& to) {
                double worst = 0.0;
                for (std::int64_t i : from) {
                    const auto p = oracle::coords(a.shape, a.spacing, i);
                    double best = 1e300;
                    for (std::int64_t j : to) {
                        const auto q = oracle::coords(a.shape, a.spacing, j);
                        const double d = std::hypot(p[0] - q[0], p[1] - q[1]);
                        best = std::min(best, d);
                    }
                    worst = std::max(worst, best);
                }
                return worst;
            };
            const double hd = std::max(directed_max(ba, bb), directed_max(bb, ba));
            CHECK(hd95(a, b) <= hd + 1e-12);
        }
    }
}

TEST_CASE("percentile interpolation") {
    CHECK(percentile_linear({1.0, 2.0, 3.0, 4.0}, 50.0) == doctest::Approx(2.5));
    CHECK(percentile_linear({5.0}, 95.0) == 5.0);
    CHECK(percentile_linear({0.0, 10.0}, 95.0) == doctest::Approx(9.5));
}

TEST_CASE("eval report aggregates") {
    EvalReport r;
    r.add(0.5, 1.0, false);
    r.add(0.7, 3.0, false);
    r.finalize();
    CHECK(r.dsc_mean == doctest::Approx(0.6));
    CHECK(r.hd95_mean == doctest::Approx(2.0));

    const RunSummary s = summarize_runs({0.2, 0.4, 0.6});
    CHECK(s.mean == doctest::Approx(0.4));
    CHECK(s.stddev == doctest::Approx(std::sqrt(2.0 / 75.0)));
}
