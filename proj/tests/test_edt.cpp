#include <doctest.h>

#include <cmath>

#include "blseg/edt.hpp"
#include "blseg/rng.hpp"
#include "oracles.hpp"

using namespace blseg;

TEST_CASE("single centre feature on a 3x3 grid") {
    BinaryMask m({3, 3}, {1.0, 1.0});
    m.values[static_cast<std::size_t>(m.index(1, 1))] = 1;
    const ScalarGrid d = edt(m);
    const double r2 = std::sqrt(2.0);
    CHECK(d.at(d.index(1, 1)) == doctest::Approx(0.0));
    CHECK(d.at(d.index(0, 1)) == doctest::Approx(1.0));
    CHECK(d.at(d.index(1, 0)) == doctest::Approx(1.0));
    CHECK(d.at(d.index(0, 0)) == doctest::Approx(r2));
    CHECK(d.at(d.index(2, 2)) == doctest::Approx(r2));
}

TEST_CASE("1x4 row with spacing 2 along the row") {
    BinaryMask m({1, 4}, {1.0, 2.0});
    m.values[0] = 1;
    const ScalarGrid d = edt(m);
    CHECK(d.values[0] == doctest::Approx(0.0));
    CHECK(d.values[1] == doctest::Approx(2.0));
    CHECK(d.values[2] == doctest::Approx(4.0));
    CHECK(d.values[3] == doctest::Approx(6.0));
}

TEST_CASE("empty feature set throws") {
    BinaryMask m({3, 3}, {1.0, 1.0});
    CHECK_THROWS_AS(edt(m), EmptyFeatureSet);
}

TEST_CASE("matches brute force on random 2-D masks") {
    Rng rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const int ny = static_cast<int>(rng.uniform_int(1, 16));
        const int nx = static_cast<int>(rng.uniform_int(1, 16));
        const Spacing sp{rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)};
        const BinaryMask m = oracle::random_mask(rng, {ny, nx}, sp, rng.uniform(0.05, 0.6));
        const ScalarGrid fast = edt(m);
        const ScalarGrid slow = oracle::brute_edt(m);
        for (std::size_t i = 0; i < fast.values.size(); ++i)
            CHECK(std::abs(fast.values[i] - slow.values[i]) <= 1e-9);
    }
}

TEST_CASE("matches brute force on random 3-D masks") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const int nz = static_cast<int>(rng.uniform_int(1, 8));
        const int ny = static_cast<int>(rng.uniform_int(1, 10));
        const int nx = static_cast<int>(rng.uniform_int(1, 10));
        const Spacing sp{rng.uniform(0.5, 4.0), rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.0)};
        const BinaryMask m = oracle::random_mask(rng, {nz, ny, nx}, sp, 0.1);
        const ScalarGrid fast = edt(m);
        const ScalarGrid slow = oracle::brute_edt(m);
        for (std::size_t i = 0; i < fast.values.size(); ++i)
            CHECK(std::abs(fast.values[i] - slow.values[i]) <= 1e-9);
    }
}

TEST_CASE("distance field properties") {
    Rng rng(44);
    const BinaryMask m = oracle::random_mask(rng, {12, 12}, {1.0, 1.0}, 0.15);
    const ScalarGrid d = edt(m);

    SUBCASE("zero exactly on features, nonnegative elsewhere") {
        for (std::int64_t i = 0; i < m.size(); ++i) {
            if (m.values[static_cast<std::size_t>(i)])
                CHECK(d.values[static_cast<std::size_t>(i)] == 0.0);
            else
                CHECK(d.values[static_cast<std::size_t>(i)] > 0.0);
        }
    }

    SUBCASE("1-Lipschitz between adjacent pixel centres") {
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x + 1 < 12; ++x)
                CHECK(std::abs(d.at(d.index(y, x)) - d.at(d.index(y, x + 1))) <= 1.0 + 1e-12);
    }

    SUBCASE("monotone under dilation") {
        BinaryMask bigger = m;
        for (int k = 0; k < 10; ++k)
            bigger.values[static_cast<std::size_t>(rng.uniform_int(0, bigger.size() - 1))] = 1;
        const ScalarGrid d2 = edt(bigger);
        for (std::size_t i = 0; i < d.values.size(); ++i)
            CHECK(d2.values[i] <= d.values[i] + 1e-12);
    }

    SUBCASE("spacing covariance") {
        BinaryMask scaled = m;
        scaled.spacing = {2.5, 2.5};
        const ScalarGrid d2 = edt(scaled);
        for (std::size_t i = 0; i < d.values.size(); ++i)
            CHECK(d2.values[i] == doctest::Approx(2.5 * d.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("per-slice transform") {
    BinaryMask m({3, 4, 4}, {2.0, 1.0, 1.0});
    // features only in slice 0
    m.values[static_cast<std::size_t>(m.index(0, 1, 1))] = 1;
    const PerSliceEdt per = edt_per_slice(m);
    CHECK(per.empty_slice == std::vector<std::uint8_t>{0, 1, 1});

    BinaryMask flat({4, 4}, {1.0, 1.0});
    flat.values[static_cast<std::size_t>(flat.index(1, 1))] = 1;
    const ScalarGrid d2 = edt(flat);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            CHECK(per.distance.at(per.distance.index(0, y, x)) ==
                  doctest::Approx(d2.at(d2.index(y, x))));

    SUBCASE("all slices nonempty equals slicewise edt") {
        Rng rng(9);
        BinaryMask vol({3, 6, 5}, {3.0, 0.7, 1.3});
        for (int z = 0; z < 3; ++z) {
            bool any = false;
            for (int y = 0; y < 6; ++y)
                for (int x = 0; x < 5; ++x) {
                    const bool v = rng.uniform() < 0.2;
                    vol.values[static_cast<std::size_t>(vol.index(z, y, x))] = v;
                    any = any || v;
                }
            if (!any) vol.values[static_cast<std::size_t>(vol.index(z, 2, 2))] = 1;
        }
        const PerSliceEdt per2 = edt_per_slice(vol);
        CHECK(per2.empty_slice == std::vector<std::uint8_t>{0, 0, 0});
        for (int z = 0; z < 3; ++z) {
            BinaryMask sl({6, 5}, {0.7, 1.3});
            for (std::int64_t i = 0; i < 30; ++i)
                sl.values[static_cast<std::size_t>(i)] =
                    vol.values[static_cast<std::size_t>(z * 30 + i)];
            const ScalarGrid dz = edt(sl);
            for (std::int64_t i = 0; i < 30; ++i)
                CHECK(per2.distance.values[static_cast<std::size_t>(z * 30 + i)] ==
                      doctest::Approx(dz.values[static_cast<std::size_t>(i)]));
        }

        SUBCASE("full 3-D distances dominate per-slice distances") {
            const ScalarGrid d3 = edt(vol);
            for (std::size_t i = 0; i < d3.values.size(); ++i)
                CHECK(d3.values[i] <= per2.distance.values[i] + 1e-12);
        }
    }
}
