#ifndef BLSEG_HARNESS_HPP
#define BLSEG_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "blseg/config.hpp"
#include "blseg/levelset.hpp"
#include "blseg/losses.hpp"
#include "blseg/metrics.hpp"
#include "blseg/model.hpp"
#include "blseg/schedule.hpp"
#include "blseg/synthdata.hpp"

namespace blseg {

enum class AuxLoss { none, boundary, hausdorff };

// One training run: dataset source, loss composition, schedule, optimizer
// settings. Exactly one regional loss; boundary and Hausdorff terms are
// mutually exclusive.
struct ExperimentConfig {
    SynthConfig synth;
    int n_samples = 250;
    std::string data_dir;  // when set, load this dataset instead of generating

    RegionalLoss regional = RegionalLoss::gdl;
    AuxLoss aux = AuxLoss::none;
    DistanceMode map_mode = DistanceMode::per_slice_2d;
    bool boundary_only = false;  // weights fixed to (0, 1)

    AlphaSchedule schedule = AlphaSchedule::rebalance();
    HyperParams hp;

    int epochs = 40;
    int batch_size = 8;
    double lr = 0.001;
    int plateau_patience = 20;
    std::uint64_t seed = 1;
    bool timing = false;  // when false the batch_ms column logs 0 (deterministic path)

    std::string out_dir;

    static ExperimentConfig from_kv(const KeyValueConfig& kv);
    static ExperimentConfig from_file(const std::string& path);
    void validate() const;
};

// MetricsLog row; CSV schema:
// epoch,loss_total,loss_regional,loss_boundary,alpha,val_dsc,val_hd95,lr,batch_ms
struct EpochRow {
    int epoch = 0;
    double loss_total = 0.0;
    double loss_regional = 0.0;
    double loss_boundary = 0.0;  // auxiliary term (boundary or Hausdorff)
    double alpha = 0.0;          // effective boundary weight this epoch
    double val_dsc = 0.0;
    double val_hd95 = 0.0;
    double lr = 0.0;
    double batch_ms = 0.0;
};

void write_metrics_csv(const std::vector<EpochRow>& rows, const std::string& path);
std::vector<EpochRow> read_metrics_csv(const std::string& path);

struct RunResult {
    std::vector<EpochRow> log;
    EvalReport best_report;   // metrics of the best checkpoint on the validation split
    double best_val_dsc = 0.0;
    int best_epoch = -1;
    EvalReport final_report;  // metrics of the final weights
};

// Executes the full training protocol: per-epoch minibatch Adam with
// scheduled loss weights, validation each epoch, plateau-halved lr,
// best-checkpoint selection by validation DSC. Deterministic for a fixed
// config and seed. When out_dir is set, writes metrics.csv plus final and
// best checkpoints there.
RunResult run_experiment(const ExperimentConfig& cfg);

struct BenchmarkRow {
    std::string name;
    double mean_ms = 0.0;
    double std_ms = 0.0;
    int batches = 0;
};

// Wall-clock per training batch for the regional loss alone, with the
// boundary term, and with the Hausdorff term, under identical data,
// model init and step count.
std::vector<BenchmarkRow> benchmark_losses(const ExperimentConfig& cfg, int timed_batches,
                                           int warmup_batches = 10);

void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::string& path);

// Validation-DSC curves: CSV columns epoch,<name...>,mean and an SVG line
// plot with one polyline per run plus the mean series.
void emit_curves(const std::vector<std::vector<EpochRow>>& runs,
                 const std::vector<std::string>& names, const std::string& csv_path,
                 const std::string& svg_path);

// Applies BLSEG_OUT_ROOT to relative output paths.
std::string resolve_out_dir(const std::string& dir);

} // namespace blseg

#endif // BLSEG_HARNESS_HPP
