#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "blseg/harness.hpp"

using namespace blseg;
namespace fs = std::filesystem;

namespace {

// tiny but real training setup: 16x16 images, a handful of samples
KeyValueConfig tiny_kv() {
    return KeyValueConfig::from_string(R"(
        synth.shape = 16,16
        synth.fraction = 0.02
        synth.radius_min = 1.2
        synth.radius_max = 2.0
        synth.lesions_min = 1
        synth.lesions_max = 1
        data.samples = 10
        train.epochs = 3
        train.batch = 4
        train.seed = 3
        loss.regional = gdl
        loss.boundary = 2d
        alpha.strategy = rebalance
    )");
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = ExperimentConfig::from_kv(tiny_kv());
    CHECK(cfg.synth.shape == Shape{16, 16});
    CHECK(cfg.regional == RegionalLoss::gdl);
    CHECK(cfg.aux == AuxLoss::boundary);
    CHECK(cfg.map_mode == DistanceMode::per_slice_2d);
    CHECK(cfg.schedule.strategy == AlphaStrategy::rebalance);
    CHECK(cfg.epochs == 3);

    SUBCASE("boundary and hausdorff are mutually exclusive") {
        KeyValueConfig kv = tiny_kv();
        kv.set("loss.hausdorff", "on");
        CHECK_THROWS_AS(ExperimentConfig::from_kv(kv), ConfigError);
    }
    SUBCASE("comments and blank lines are ignored") {
        const KeyValueConfig kv = KeyValueConfig::from_string("a.b = 3 # trailing\n\n# full line\nc = x\n");
        CHECK(kv.get_int("a.b", 0) == 3);
        CHECK(kv.get("c", "") == "x");
    }
    SUBCASE("malformed lines are rejected") {
        CHECK_THROWS_AS(KeyValueConfig::from_string("just a line\n"), ConfigError);
    }
}

TEST_CASE("metrics CSV round trip") {
    std::vector<EpochRow> rows(3);
    for (int i = 0; i < 3; ++i) {
        rows[static_cast<std::size_t>(i)].epoch = i;
        rows[static_cast<std::size_t>(i)].loss_total = 0.1 * i + 0.123456789;
        rows[static_cast<std::size_t>(i)].val_dsc = 0.5 + 0.01 * i;
        rows[static_cast<std::size_t>(i)].val_hd95 = 3.25 - i;
        rows[static_cast<std::size_t>(i)].lr = 0.001;
        rows[static_cast<std::size_t>(i)].alpha = 0.01 * (i + 1);
    }
    const std::string path = (fs::temp_directory_path() / "blseg_metrics.csv").string();
    write_metrics_csv(rows, path);
    const auto back = read_metrics_csv(path);
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back[static_cast<std::size_t>(i)].epoch == i);
        CHECK(back[static_cast<std::size_t>(i)].loss_total ==
              doctest::Approx(rows[static_cast<std::size_t>(i)].loss_total).epsilon(1e-9));
        CHECK(back[static_cast<std::size_t>(i)].val_dsc ==
              doctest::Approx(rows[static_cast<std::size_t>(i)].val_dsc));
    }
}

TEST_CASE("short experiment runs deterministically") {
    ExperimentConfig cfg = ExperimentConfig::from_kv(tiny_kv());
    const std::string out1 = (fs::temp_directory_path() / "blseg_run1").string();
    const std::string out2 = (fs::temp_directory_path() / "blseg_run2").string();
    fs::remove_all(out1);
    fs::remove_all(out2);

    cfg.out_dir = out1;
    const RunResult r1 = run_experiment(cfg);
    cfg.out_dir = out2;
    const RunResult r2 = run_experiment(cfg);

    CHECK(read_file(out1 + "/metrics.csv") == read_file(out2 + "/metrics.csv"));
    CHECK(r1.best_val_dsc == r2.best_val_dsc);
    REQUIRE(r1.log.size() == 3);

    SUBCASE("epoch column is strictly increasing and alpha follows the schedule") {
        for (std::size_t e = 0; e < r1.log.size(); ++e) {
            CHECK(r1.log[e].epoch == static_cast<int>(e));
            CHECK(r1.log[e].alpha == doctest::Approx(0.01 + 0.01 * static_cast<double>(e)));
        }
    }
    SUBCASE("logged total equals the weighted decomposition") {
        for (const EpochRow& row : r1.log) {
            const double recomposed = (1.0 - row.alpha) * row.loss_regional + row.alpha * row.loss_boundary;
            CHECK(row.loss_total == doctest::Approx(recomposed).epsilon(1e-9));
        }
    }
    SUBCASE("batch_ms column is zero on the deterministic path") {
        for (const EpochRow& row : r1.log) CHECK(row.batch_ms == 0.0);
    }
}

TEST_CASE("regional-only run logs the regional loss as the total") {
    KeyValueConfig kv = tiny_kv();
    kv.set("loss.boundary", "off");
    ExperimentConfig cfg = ExperimentConfig::from_kv(kv);
    const RunResult r = run_experiment(cfg);
    for (const EpochRow& row : r.log) {
        CHECK(row.loss_total == doctest::Approx(row.loss_regional).epsilon(1e-12));
        CHECK(row.alpha == 0.0);
    }
}

TEST_CASE("curve emission round trip") {
    std::vector<std::vector<EpochRow>> runs(2);
    for (int r = 0; r < 2; ++r)
        for (int e = 0; e < 4; ++e) {
            EpochRow row;
            row.epoch = e;
            row.val_dsc = 0.1 * (r + 1) + 0.05 * e;
            runs[static_cast<std::size_t>(r)].push_back(row);
        }
    const std::string csv = (fs::temp_directory_path() / "blseg_curves.csv").string();
    const std::string svg = (fs::temp_directory_path() / "blseg_curves.svg").string();
    emit_curves(runs, {"seed1", "seed2"}, csv, svg);

    std::ifstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header == "epoch,seed1,seed2,mean");
    std::string row0;
    std::getline(is, row0);
    CHECK(row0 == "0,0.1,0.2,0.15");

    const std::string svg_text = read_file(svg);
    CHECK(svg_text.find("<svg") != std::string::npos);
    CHECK(svg_text.find("polyline") != std::string::npos);

    SUBCASE("single-epoch log still yields valid files") {
        std::vector<std::vector<EpochRow>> one(1);
        EpochRow row;
        row.epoch = 0;
        row.val_dsc = 0.4;
        one[0].push_back(row);
        emit_curves(one, {"only"}, csv, svg);
        CHECK(read_file(svg).find("polyline") != std::string::npos);
    }
}

TEST_CASE("out root env var is applied to relative paths") {
    setenv("BLSEG_OUT_ROOT", "/tmp/blseg_root", 1);
    CHECK(resolve_out_dir("runs/x") == "/tmp/blseg_root/runs/x");
    CHECK(resolve_out_dir("/abs/path") == "/abs/path");
    unsetenv("BLSEG_OUT_ROOT");
}
