// Command-line harness around the training/evaluation library. Subcommands
// mirror the experimental protocol: gen-data, make-distmaps, train,
// evaluate, benchmark, report.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blseg/grid_io.hpp"
#include "blseg/harness.hpp"

namespace fs = std::filesystem;
using namespace blseg;

namespace {

ExperimentConfig load_config(const std::string& config_path, std::uint64_t seed_override,
                             bool has_seed, const std::string& out_override) {
    KeyValueConfig kv =
        config_path.empty() ? KeyValueConfig() : KeyValueConfig::from_file(config_path);
    if (has_seed) kv.set("train.seed", std::to_string(seed_override));
    if (!out_override.empty()) kv.set("out.dir", out_override);
    ExperimentConfig cfg = ExperimentConfig::from_kv(kv);
    cfg.out_dir = resolve_out_dir(cfg.out_dir);
    return cfg;
}

int cmd_gen_data(const ExperimentConfig& cfg, const std::string& dir) {
    const std::string out = resolve_out_dir(dir);
    Dataset ds = generate(cfg.synth, cfg.n_samples);
    write_dataset(ds, out);
    std::printf("wrote %zu train / %zu val samples to %s\n", ds.train.size(), ds.val.size(),
                out.c_str());
    return 0;
}

int cmd_make_distmaps(const std::string& data_dir, const std::string& mode_name) {
    const DistanceMode mode =
        mode_name == "3d" ? DistanceMode::full_3d : DistanceMode::per_slice_2d;
    Dataset ds = read_dataset(data_dir);
    const fs::path out = fs::path(data_dir) / ("phi_" + mode_name);
    fs::create_directories(out);
    int id = 0;
    auto emit = [&](const std::vector<Sample>& split) {
        for (const Sample& s : split) {
            const ScalarGrid phi = signed_distance(s.mask, mode);
            write_grid(phi, (out / ("case" + std::to_string(id) + "_phi.sgrid")).string());
            ++id;
        }
    };
    emit(ds.train);
    emit(ds.val);
    std::printf("wrote %d level-set maps to %s\n", id, out.string().c_str());
    return 0;
}

int cmd_train(const ExperimentConfig& cfg) {
    if (cfg.out_dir.empty()) {
        std::fprintf(stderr, "train: out.dir (or --out) is required\n");
        return 2;
    }
    const RunResult r = run_experiment(cfg);
    std::printf("run finished: best val DSC %.4f at epoch %d (final %.4f)\n", r.best_val_dsc,
                r.best_epoch, r.log.empty() ? 0.0 : r.log.back().val_dsc);
    std::printf("metrics: %s\n", (fs::path(cfg.out_dir) / "metrics.csv").string().c_str());
    return 0;
}

int cmd_evaluate(const ExperimentConfig& cfg, const std::string& checkpoint) {
    Dataset ds = cfg.data_dir.empty() ? generate(cfg.synth, cfg.n_samples)
                                      : read_dataset(cfg.data_dir);
    TinySegNet net = TinySegNet::create(1, 0);
    AdamState adam;
    load_checkpoint(checkpoint, net, adam);
    Model model(std::move(net));

    EvalReport report;
    const Spacing spacing2d{ds.val[0].mask.spacing[ds.val[0].mask.ndim() - 2],
                            ds.val[0].mask.spacing[ds.val[0].mask.ndim() - 1]};
    for (const Sample& s : ds.val) {
        if (s.image.ndim() != 2) {
            std::fprintf(stderr, "evaluate: 3-D volumes are evaluated per slice by train\n");
            return 2;
        }
        ModelInput in{1, s.image.shape[0], s.image.shape[1], s.image.values};
        ForwardResult fwd = model.forward({in}, spacing2d);
        const BinaryMask pred = threshold(fwd.prob[0], cfg.hp.delta);
        bool sentinel = false;
        const double h = hd95(pred, s.mask, &sentinel);
        report.add(dsc(pred, s.mask), h, sentinel);
    }
    report.finalize();
    std::printf("cases=%zu mean DSC=%.4f mean HD95=%.4f\n", report.dsc_cases.size(),
                report.dsc_mean, report.hd95_mean);
    return 0;
}

int cmd_benchmark(const ExperimentConfig& cfg, int batches) {
    const std::vector<BenchmarkRow> rows = benchmark_losses(cfg, batches);
    std::printf("%-22s %10s %10s %8s\n", "loss", "mean ms", "std ms", "batches");
    for (const BenchmarkRow& r : rows)
        std::printf("%-22s %10.3f %10.3f %8d\n", r.name.c_str(), r.mean_ms, r.std_ms, r.batches);
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_benchmark_csv(rows, (fs::path(cfg.out_dir) / "benchmark.csv").string());
        std::printf("wrote %s\n", (fs::path(cfg.out_dir) / "benchmark.csv").string().c_str());
    }
    return 0;
}

int cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    std::vector<std::vector<EpochRow>> runs;
    std::vector<std::string> names;
    std::vector<double> best_dscs, final_dscs;
    for (const std::string& dir : run_dirs) {
        runs.push_back(read_metrics_csv((fs::path(dir) / "metrics.csv").string()));
        names.push_back(fs::path(dir).filename().string());
        double best = 0.0;
        for (const EpochRow& r : runs.back()) best = std::max(best, r.val_dsc);
        best_dscs.push_back(best);
        final_dscs.push_back(runs.back().back().val_dsc);
    }
    const std::string out = resolve_out_dir(out_dir);
    fs::create_directories(out);
    emit_curves(runs, names, (fs::path(out) / "curves.csv").string(),
                (fs::path(out) / "curves.svg").string());
    const RunSummary best = summarize_runs(best_dscs);
    const RunSummary fin = summarize_runs(final_dscs);
    std::printf("runs=%zu best-DSC mean %.4f (std %.4f)  final-DSC mean %.4f (std %.4f)\n",
                runs.size(), best.mean, best.stddev, fin.mean, fin.stddev);
    std::printf("wrote %s and curves.svg\n", (fs::path(out) / "curves.csv").string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-loss segmentation harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, data_dir, mode = "2d", checkpoint;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int batches = 200;
    std::vector<std::string> run_dirs;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("--seed", seed, "override train.seed")->each([&](const std::string&) {
            has_seed = true;
        });
        sub->add_option("--out", out_dir, "override out.dir");
    };

    CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
    add_common(gen);
    gen->add_option("--dir", data_dir, "output dataset directory")->required();

    CLI::App* dist = app.add_subcommand("make-distmaps", "precompute level-set maps");
    dist->add_option("--dir", data_dir, "dataset directory")->required();
    dist->add_option("--mode", mode, "2d or 3d")->check(CLI::IsMember({"2d", "3d"}));

    CLI::App* train = app.add_subcommand("train", "run a training experiment");
    add_common(train);

    CLI::App* eval = app.add_subcommand("evaluate", "evaluate a checkpoint on the val split");
    add_common(eval);
    eval->add_option("--checkpoint", checkpoint, "TSNET checkpoint")->required();

    CLI::App* bench = app.add_subcommand("benchmark", "per-batch timing of the loss variants");
    add_common(bench);
    bench->add_option("--batches", batches, "timed batches per variant");

    CLI::App* report = app.add_subcommand("report", "aggregate metrics of finished runs");
    report->add_option("--runs", run_dirs, "run directories with metrics.csv")->required();
    report->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_data(load_config(config_path, seed, has_seed, out_dir), data_dir);
        if (dist->parsed()) return cmd_make_distmaps(data_dir, mode);
        if (train->parsed()) return cmd_train(load_config(config_path, seed, has_seed, out_dir));
        if (eval->parsed()) return cmd_evaluate(load_config(config_path, seed, has_seed, out_dir), checkpoint);
        if (bench->parsed()) return cmd_benchmark(load_config(config_path, seed, has_seed, out_dir), batches);
        if (report->parsed()) return cmd_report(run_dirs, out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
