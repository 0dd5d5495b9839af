#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "blseg/grid.hpp"
#include "blseg/grid_io.hpp"
#include "blseg/rng.hpp"
#include "oracles.hpp"

using namespace blseg;
namespace fs = std::filesystem;

namespace {
std::string tmp_file(const char* name) {
    return (fs::temp_directory_path() / name).string();
}
} // namespace

TEST_CASE("threshold is inclusive at delta") {
    ProbMap p({1, 3}, {1.0, 1.0});
    p.values = {0.2, 0.6, 0.5};
    const BinaryMask m = threshold(p, 0.5);
    CHECK(m.values == std::vector<std::uint8_t>{0, 1, 1});
}

TEST_CASE("threshold of all zeros stays empty") {
    ProbMap p({2, 2}, {1.0, 1.0}, 0.0);
    CHECK(threshold(p, 0.5).count() == 0);
}

TEST_CASE("threshold is idempotent on binary input") {
    Rng rng(7);
    ProbMap p({4, 4}, {1.0, 1.0});
    for (auto& v : p.values) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
    const BinaryMask m = threshold(p, 0.5);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        CHECK(static_cast<double>(m.values[i]) == p.values[i]);
}

TEST_CASE("threshold rejects delta outside (0,1)") {
    ProbMap p({1, 2}, {1.0, 1.0}, 0.5);
    CHECK_THROWS_AS(threshold(p, 0.0), InvalidThreshold);
    CHECK_THROWS_AS(threshold(p, 1.0), InvalidThreshold);
    CHECK_THROWS_AS(threshold(p, -0.3), InvalidThreshold);
}

TEST_CASE("threshold partitions the domain") {
    Rng rng(11);
    const ProbMap p = oracle::random_prob(rng, {6, 5}, {1.0, 2.0}, 0.0, 1.0);
    const BinaryMask m = threshold(p, 0.4);
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < m.values.size(); ++i)
        covered += (m.values[i] == 1) + (m.values[i] == 0);
    CHECK(covered == m.size());  // every pixel in exactly one side
}

TEST_CASE("grid round-trip is bit-exact") {
    Rng rng(3);
    ScalarGrid g({3, 4, 5}, {0.731234567891234, 1.25, 2.0});
    for (auto& v : g.values) v = rng.normal() * 17.3;
    const std::string path = tmp_file("blseg_roundtrip.sgrid");
    write_grid(g, path);
    const LoadedGrid back = read_grid(path);
    CHECK(back.dtype == GridDType::f64);
    CHECK(back.shape == g.shape);
    CHECK(back.spacing == g.spacing);
    CHECK(back.values == g.values);

    BinaryMask m({2, 3}, {1.0, 1.0});
    m.values = {1, 0, 1, 1, 0, 0};
    const std::string mpath = tmp_file("blseg_roundtrip_mask.sgrid");
    write_grid(m, mpath);
    const BinaryMask mb = read_grid(mpath).as_mask();
    CHECK(mb.values == m.values);
    CHECK(mb.spacing == m.spacing);
}

TEST_CASE("truncated payload raises FormatError") {
    ScalarGrid g({4, 4}, {1.0, 1.0}, 1.5);
    const std::string path = tmp_file("blseg_trunc.sgrid");
    write_grid(g, path);
    // chop the payload
    const auto size = fs::file_size(path);
    fs::resize_file(path, size - 8);
    CHECK_THROWS_AS(read_grid(path), FormatError);
}

TEST_CASE("header dimension mismatch raises FormatError") {
    const std::string path = tmp_file("blseg_badheader.sgrid");
    {
        std::ofstream os(path, std::ios::binary);
        os << "SGRID v1 2 3 3 4 1.0 1.0 u8\n";  // ndim=2 but three extents
        for (int i = 0; i < 36; ++i) os.put(0);
    }
    CHECK_THROWS_AS(read_grid(path), FormatError);
}

TEST_CASE("bad magic raises FormatError") {
    const std::string path = tmp_file("blseg_badmagic.sgrid");
    {
        std::ofstream os(path, std::ios::binary);
        os << "GRIDS v1 2 2 2 1.0 1.0 u8\n";
        for (int i = 0; i < 4; ++i) os.put(0);
    }
    CHECK_THROWS_AS(read_grid(path), FormatError);
}

TEST_CASE("invariants are enforced") {
    CHECK_THROWS_AS(ScalarGrid({0, 3}, {1.0, 1.0}), ShapeError);
    CHECK_THROWS_AS(ScalarGrid({2, 3}, {1.0, -1.0}), ShapeError);
    CHECK_THROWS_AS(ScalarGrid({2}, {1.0}), ShapeError);
    ScalarGrid g({2, 2}, {1.0, 1.0});
    g.values[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(g.validate(), ShapeError);
    BinaryMask m({2, 2}, {1.0, 1.0});
    m.values[0] = 2;
    CHECK_THROWS_AS(m.validate(), ShapeError);
    ProbMap p({2, 2}, {1.0, 1.0});
    p.values[3] = 1.5;
    CHECK_THROWS_AS(p.validate(), ShapeError);
}
