#include "blseg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "blseg/grid_io.hpp"
#include "blseg/rng.hpp"

namespace fs = std::filesystem;

namespace blseg {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

RegionalLoss parse_regional(const std::string& s) {
    if (s == "gdl") return RegionalLoss::gdl;
    if (s == "weighted_ce") return RegionalLoss::weighted_ce;
    if (s == "focal") return RegionalLoss::focal;
    throw ConfigError("unknown regional loss '" + s + "'");
}

// One 2-D training item: input stack, ground truth, level-set map.
struct TrainItem {
    ModelInput input;
    BinaryMask mask;
    ScalarGrid phi;
};

ModelInput to_input(const ScalarGrid& image2d) {
    ModelInput in;
    in.channels = 1;
    in.height = image2d.shape[0];
    in.width = image2d.shape[1];
    in.data = image2d.values;
    return in;
}

ScalarGrid slice2d(const ScalarGrid& vol, int z) {
    const int ny = vol.shape[1], nx = vol.shape[2];
    ScalarGrid s({ny, nx}, {vol.spacing[1], vol.spacing[2]});
    const std::size_t base = static_cast<std::size_t>(z) * ny * nx;
    std::copy(vol.values.begin() + static_cast<std::ptrdiff_t>(base),
              vol.values.begin() + static_cast<std::ptrdiff_t>(base + s.values.size()),
              s.values.begin());
    return s;
}

BinaryMask slice2d(const BinaryMask& vol, int z) {
    const int ny = vol.shape[1], nx = vol.shape[2];
    BinaryMask s({ny, nx}, {vol.spacing[1], vol.spacing[2]});
    const std::size_t base = static_cast<std::size_t>(z) * ny * nx;
    std::copy(vol.values.begin() + static_cast<std::ptrdiff_t>(base),
              vol.values.begin() + static_cast<std::ptrdiff_t>(base + s.values.size()),
              s.values.begin());
    return s;
}

// Volumes are processed as stacks of independent 2-D slices; in full_3d
// mode each slice is paired with the matching slice of the 3-D level set.
void append_items(std::vector<TrainItem>& items, const Sample& s, DistanceMode mode) {
    if (s.image.ndim() == 2) {
        TrainItem it;
        it.input = to_input(s.image);
        it.mask = s.mask;
        it.phi = signed_distance(s.mask, mode);
        items.push_back(std::move(it));
        return;
    }
    const ScalarGrid phi_vol = signed_distance(s.mask, mode);
    for (int z = 0; z < s.image.shape[0]; ++z) {
        TrainItem it;
        it.input = to_input(slice2d(s.image, z));
        it.mask = slice2d(s.mask, z);
        it.phi = slice2d(phi_vol, z);
        items.push_back(std::move(it));
    }
}

struct ValItem {
    ModelInput input;
    BinaryMask mask;
};

void append_val_items(std::vector<ValItem>& items, const Sample& s) {
    if (s.image.ndim() == 2) {
        items.push_back(ValItem{to_input(s.image), s.mask});
        return;
    }
    for (int z = 0; z < s.image.shape[0]; ++z)
        items.push_back(ValItem{to_input(slice2d(s.image, z)), slice2d(s.mask, z)});
}

LossResult aux_loss(AuxLoss aux, const ProbMap& s, const BinaryMask& g, const ScalarGrid& phi,
                    const HyperParams& hp) {
    switch (aux) {
        case AuxLoss::boundary: return boundary_loss(s, phi);
        case AuxLoss::hausdorff: return hausdorff_loss(s, g, hp.beta, hp.delta);
        case AuxLoss::none: break;
    }
    LossResult zero;
    zero.grad = ScalarGrid(s.shape, s.spacing);
    return zero;
}

} // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    return from_kv(KeyValueConfig::from_file(path));
}

ExperimentConfig ExperimentConfig::from_kv(const KeyValueConfig& kv) {
    ExperimentConfig cfg;
    cfg.data_dir = kv.get("data.dir", "");
    cfg.n_samples = kv.get_int("data.samples", 250);

    const auto shape = kv.get_list("synth.shape", {64, 64});
    cfg.synth.shape.assign(shape.size(), 0);
    for (std::size_t i = 0; i < shape.size(); ++i) cfg.synth.shape[i] = static_cast<int>(shape[i]);
    const auto spacing = kv.get_list("synth.spacing", std::vector<double>(shape.size(), 1.0));
    cfg.synth.spacing = spacing;
    cfg.synth.n_lesions_min = kv.get_int("synth.lesions_min", 1);
    cfg.synth.n_lesions_max = kv.get_int("synth.lesions_max", 3);
    cfg.synth.lesion_radius_min = kv.get_double("synth.radius_min", 1.5);
    cfg.synth.lesion_radius_max = kv.get_double("synth.radius_max", 3.5);
    cfg.synth.target_foreground_fraction = kv.get_double("synth.fraction", 0.003);
    cfg.synth.contrast = kv.get_double("synth.contrast", 0.8);
    cfg.synth.noise_std = kv.get_double("synth.noise", 0.1);
    cfg.synth.background_amplitude = kv.get_double("synth.background", 0.2);
    cfg.synth.empty_fraction = kv.get_double("synth.empty_fraction", 0.0);
    cfg.synth.train_fraction = kv.get_double("synth.train_fraction", 0.8);

    cfg.regional = parse_regional(kv.get("loss.regional", "gdl"));
    const std::string bnd = kv.get("loss.boundary", "off");
    const bool hausdorff = kv.get_bool("loss.hausdorff", false);
    if (bnd == "off") {
        cfg.aux = hausdorff ? AuxLoss::hausdorff : AuxLoss::none;
        cfg.map_mode = DistanceMode::per_slice_2d;
    } else if (bnd == "2d") {
        cfg.aux = AuxLoss::boundary;
        cfg.map_mode = DistanceMode::per_slice_2d;
    } else if (bnd == "3d") {
        cfg.aux = AuxLoss::boundary;
        cfg.map_mode = DistanceMode::full_3d;
    } else {
        throw ConfigError("loss.boundary must be off, 2d or 3d");
    }
    if (bnd != "off" && hausdorff)
        throw ConfigError("boundary and hausdorff terms are mutually exclusive");
    cfg.boundary_only = kv.get_bool("loss.boundary_only", false);
    if (cfg.boundary_only && cfg.aux != AuxLoss::boundary)
        throw ConfigError("loss.boundary_only requires loss.boundary");

    AlphaSchedule sched;
    sched.strategy = parse_alpha_strategy(kv.get("alpha.strategy", "rebalance"));
    sched.alpha0 = kv.get_double("alpha.init", 0.01);
    sched.step = kv.get_double("alpha.step", 0.01);
    sched.cap = kv.get_double("alpha.cap", sched.strategy == AlphaStrategy::rebalance ? 0.99 : 1.0);
    if (sched.strategy == AlphaStrategy::constant) sched.cap = sched.alpha0;
    cfg.schedule = sched;

    cfg.hp.w0 = kv.get_double("hyper.w0", 10.0);
    cfg.hp.sigma = kv.get_double("hyper.sigma", 5.0);
    cfg.hp.gamma = kv.get_double("hyper.gamma", 2.0);
    cfg.hp.beta = kv.get_double("hyper.beta", 2.0);
    cfg.hp.epsilon = kv.get_double("hyper.epsilon", 1e-10);
    cfg.hp.delta = kv.get_double("hyper.delta", 0.5);

    cfg.epochs = kv.get_int("train.epochs", 40);
    cfg.batch_size = kv.get_int("train.batch", 8);
    cfg.lr = kv.get_double("train.lr", 0.001);
    cfg.plateau_patience = kv.get_int("train.patience", 20);
    cfg.seed = kv.get_u64("train.seed", 1);
    cfg.timing = kv.get_bool("timing.enabled", false);
    cfg.out_dir = kv.get("out.dir", "");
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (data_dir.empty()) synth.validate();
    schedule.validate();
    hp.validate();
    if (epochs <= 0) throw ConfigError("train.epochs must be positive");
    if (batch_size <= 0) throw ConfigError("train.batch must be positive");
    if (!(lr > 0.0)) throw ConfigError("train.lr must be positive");
    if (plateau_patience <= 0) throw ConfigError("train.patience must be positive");
    if (boundary_only && aux != AuxLoss::boundary)
        throw ConfigError("boundary_only requires the boundary term");
}

void write_metrics_csv(const std::vector<EpochRow>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot write '" + path + "'");
    os << "epoch,loss_total,loss_regional,loss_boundary,alpha,val_dsc,val_hd95,lr,batch_ms\n";
    for (const EpochRow& r : rows)
        os << r.epoch << ',' << fmt(r.loss_total) << ',' << fmt(r.loss_regional) << ','
           << fmt(r.loss_boundary) << ',' << fmt(r.alpha) << ',' << fmt(r.val_dsc) << ','
           << fmt(r.val_hd95) << ',' << fmt(r.lr) << ',' << fmt(r.batch_ms) << '\n';
    if (!os) throw FormatError("write failed for '" + path + "'");
}

std::vector<EpochRow> read_metrics_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw FormatError("empty metrics file");
    std::vector<EpochRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        EpochRow r;
        char comma;
        ls >> r.epoch >> comma >> r.loss_total >> comma >> r.loss_regional >> comma >>
            r.loss_boundary >> comma >> r.alpha >> comma >> r.val_dsc >> comma >> r.val_hd95 >>
            comma >> r.lr >> comma >> r.batch_ms;
        if (ls.fail()) throw FormatError("bad metrics row: " + line);
        rows.push_back(r);
    }
    return rows;
}

std::string resolve_out_dir(const std::string& dir) {
    if (dir.empty()) return dir;
    const char* root = std::getenv("BLSEG_OUT_ROOT");
    fs::path p(dir);
    if (root && *root && p.is_relative()) p = fs::path(root) / p;
    return p.string();
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    Dataset ds = cfg.data_dir.empty() ? generate(cfg.synth, cfg.n_samples)
                                      : read_dataset(cfg.data_dir);

    // Level-set maps are precomputed from the ground truth before training.
    std::vector<TrainItem> train;
    for (const Sample& s : ds.train) append_items(train, s, cfg.map_mode);
    std::vector<ValItem> val;
    for (const Sample& s : ds.val) append_val_items(val, s);
    if (train.empty() || val.empty()) throw ConfigError("dataset has an empty split");

    const Spacing spacing2d{train[0].mask.spacing[0], train[0].mask.spacing[1]};

    Model model(TinySegNet::create(train[0].input.channels, cfg.seed));
    std::vector<double> params = model.net().flatten_params();
    AdamState adam = AdamState::create(params.size(), cfg.lr);
    PlateauScheduler plateau(cfg.plateau_patience);

    RunResult result;
    std::vector<double> best_params = params;
    double lr = cfg.lr;

    const bool use_schedule = cfg.aux != AuxLoss::none && !cfg.boundary_only;

    std::vector<int> order(train.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        LossWeights w{1.0, 0.0};
        if (cfg.boundary_only)
            w = LossWeights{0.0, 1.0};
        else if (use_schedule)
            w = weights(cfg.schedule, epoch);

        Rng shuffle_rng = Rng::derive(cfg.seed, 0x5EED0000ull + static_cast<std::uint64_t>(epoch));
        shuffle_rng.shuffle(order);

        double sum_total = 0.0, sum_reg = 0.0, sum_aux = 0.0;
        std::int64_t n_items = 0;
        double batch_ms_acc = 0.0;
        int n_batches = 0;

        for (std::size_t b0 = 0; b0 < order.size(); b0 += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t b1 = std::min(order.size(), b0 + static_cast<std::size_t>(cfg.batch_size));
            const int bsz = static_cast<int>(b1 - b0);
            const auto t_start = std::chrono::steady_clock::now();

            std::vector<ModelInput> inputs;
            inputs.reserve(static_cast<std::size_t>(bsz));
            for (std::size_t i = b0; i < b1; ++i)
                inputs.push_back(train[static_cast<std::size_t>(order[i])].input);
            ForwardResult fwd = model.forward(inputs, spacing2d);

            std::vector<ScalarGrid> grads;
            grads.reserve(static_cast<std::size_t>(bsz));
            for (int k = 0; k < bsz; ++k) {
                const TrainItem& it = train[static_cast<std::size_t>(order[b0 + static_cast<std::size_t>(k)])];
                const ProbMap& s = fwd.prob[static_cast<std::size_t>(k)];

                LossResult reg = regional_loss(s, it.mask, it.phi, cfg.regional, cfg.hp);
                LossResult ax = aux_loss(cfg.aux, s, it.mask, it.phi, cfg.hp);
                double total = w.regional * reg.value + w.boundary * ax.value;
                if (cfg.aux == AuxLoss::boundary) {
                    // online linearity check: the composed loss must equal the
                    // logged decomposition at every step
                    const LossResult comb = combined(s, it.mask, it.phi, cfg.regional,
                                                     {w.regional, w.boundary}, cfg.hp);
                    if (std::abs(comb.value - total) > 1e-9)
                        throw NonFiniteGradient("combined-loss linearity violated");
                    total = comb.value;
                }
                if (!std::isfinite(total)) {
                    EpochRow diag;
                    diag.epoch = epoch;
                    diag.loss_total = total;
                    diag.loss_regional = reg.value;
                    diag.loss_boundary = ax.value;
                    diag.alpha = w.boundary;
                    diag.lr = lr;
                    result.log.push_back(diag);
                    if (!cfg.out_dir.empty())
                        write_metrics_csv(result.log, (fs::path(cfg.out_dir) / "metrics.csv").string());
                    throw NonFiniteGradient("non-finite loss at epoch " + std::to_string(epoch));
                }

                sum_total += total;
                sum_reg += reg.value;
                sum_aux += ax.value;
                ++n_items;

                ScalarGrid gr(s.shape, s.spacing);
                const double inv_b = 1.0 / static_cast<double>(bsz);
                for (std::size_t i = 0; i < gr.values.size(); ++i)
                    gr.values[i] = (w.regional * reg.grad.values[i] + w.boundary * ax.grad.values[i]) * inv_b;
                grads.push_back(std::move(gr));
            }

            const std::vector<double> pgrads = model.backward(fwd, grads);
            adam.lr = lr;
            adam_step(adam, params, pgrads);
            model.net().load_params(params);
            model.mark_params_changed();

            const auto t_end = std::chrono::steady_clock::now();
            batch_ms_acc += std::chrono::duration<double, std::milli>(t_end - t_start).count();
            ++n_batches;
        }

        // validation pass
        EvalReport report;
        for (std::size_t v0 = 0; v0 < val.size(); v0 += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t v1 = std::min(val.size(), v0 + static_cast<std::size_t>(cfg.batch_size));
            std::vector<ModelInput> inputs;
            for (std::size_t i = v0; i < v1; ++i) inputs.push_back(val[i].input);
            ForwardResult fwd = model.forward(inputs, spacing2d);
            for (std::size_t i = v0; i < v1; ++i) {
                const BinaryMask pred = threshold(fwd.prob[i - v0], cfg.hp.delta);
                bool sentinel = false;
                const double h = hd95(pred, val[i].mask, &sentinel);
                report.add(dsc(pred, val[i].mask), h, sentinel);
            }
        }
        report.finalize();

        EpochRow row;
        row.epoch = epoch;
        row.loss_total = sum_total / static_cast<double>(n_items);
        row.loss_regional = sum_reg / static_cast<double>(n_items);
        row.loss_boundary = sum_aux / static_cast<double>(n_items);
        row.alpha = w.boundary;
        row.val_dsc = report.dsc_mean;
        row.val_hd95 = report.hd95_mean;
        row.lr = lr;
        row.batch_ms = cfg.timing ? batch_ms_acc / std::max(1, n_batches) : 0.0;
        result.log.push_back(row);

        if (report.dsc_mean > result.best_val_dsc || result.best_epoch < 0) {
            result.best_val_dsc = report.dsc_mean;
            result.best_epoch = epoch;
            result.best_report = report;
            best_params = params;
        }
        if (epoch + 1 == cfg.epochs) result.final_report = report;

        plateau.observe(report.dsc_mean, lr);
    }

    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_metrics_csv(result.log, (fs::path(cfg.out_dir) / "metrics.csv").string());
        save_checkpoint((fs::path(cfg.out_dir) / "final.tsnet").string(), model.net(), adam);
        TinySegNet best_net = model.net();
        best_net.load_params(best_params);
        save_checkpoint((fs::path(cfg.out_dir) / "best.tsnet").string(), best_net, adam);
    }
    return result;
}

std::vector<BenchmarkRow> benchmark_losses(const ExperimentConfig& cfg, int timed_batches,
                                           int warmup_batches) {
    ExperimentConfig base = cfg;
    base.validate();

    Dataset ds = base.data_dir.empty() ? generate(base.synth, base.n_samples)
                                       : read_dataset(base.data_dir);
    std::vector<TrainItem> train;
    for (const Sample& s : ds.train) append_items(train, s, base.map_mode);
    const Spacing spacing2d{train[0].mask.spacing[0], train[0].mask.spacing[1]};

    struct Variant {
        std::string name;
        AuxLoss aux;
    };
    const Variant variants[] = {{"regional", AuxLoss::none},
                                {"regional+boundary", AuxLoss::boundary},
                                {"regional+hausdorff", AuxLoss::hausdorff}};

    std::vector<BenchmarkRow> rows;
    for (const Variant& var : variants) {
        Model model(TinySegNet::create(train[0].input.channels, base.seed));
        std::vector<double> params = model.net().flatten_params();
        AdamState adam = AdamState::create(params.size(), base.lr);
        const LossWeights w = var.aux == AuxLoss::none ? LossWeights{1.0, 0.0} : LossWeights{1.0, 0.01};

        std::vector<double> times;
        times.reserve(static_cast<std::size_t>(timed_batches));
        std::size_t cursor = 0;
        for (int b = 0; b < warmup_batches + timed_batches; ++b) {
            std::vector<const TrainItem*> batch;
            for (int k = 0; k < base.batch_size; ++k) {
                batch.push_back(&train[cursor]);
                cursor = (cursor + 1) % train.size();
            }
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<ModelInput> inputs;
            for (const TrainItem* it : batch) inputs.push_back(it->input);
            ForwardResult fwd = model.forward(inputs, spacing2d);
            std::vector<ScalarGrid> grads;
            for (std::size_t k = 0; k < batch.size(); ++k) {
                const TrainItem& it = *batch[k];
                LossResult reg = regional_loss(fwd.prob[k], it.mask, it.phi, base.regional, base.hp);
                LossResult ax = aux_loss(var.aux, fwd.prob[k], it.mask, it.phi, base.hp);
                ScalarGrid gr(fwd.prob[k].shape, fwd.prob[k].spacing);
                const double inv_b = 1.0 / static_cast<double>(batch.size());
                for (std::size_t i = 0; i < gr.values.size(); ++i)
                    gr.values[i] = (w.regional * reg.grad.values[i] + w.boundary * ax.grad.values[i]) * inv_b;
                grads.push_back(std::move(gr));
            }
            const std::vector<double> pgrads = model.backward(fwd, grads);
            adam_step(adam, params, pgrads);
            model.net().load_params(params);
            model.mark_params_changed();
            const auto t1 = std::chrono::steady_clock::now();
            if (b >= warmup_batches)
                times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }

        BenchmarkRow row;
        row.name = var.name;
        row.batches = static_cast<int>(times.size());
        double mean = 0.0;
        for (double t : times) mean += t;
        mean /= static_cast<double>(times.size());
        double var_acc = 0.0;
        for (double t : times) var_acc += (t - mean) * (t - mean);
        row.mean_ms = mean;
        row.std_ms = std::sqrt(var_acc / static_cast<double>(times.size()));
        rows.push_back(row);
    }
    return rows;
}

void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot write '" + path + "'");
    os << "loss,mean_ms,std_ms,batches\n";
    for (const BenchmarkRow& r : rows)
        os << r.name << ',' << fmt(r.mean_ms) << ',' << fmt(r.std_ms) << ',' << r.batches << '\n';
}

void emit_curves(const std::vector<std::vector<EpochRow>>& runs,
                 const std::vector<std::string>& names, const std::string& csv_path,
                 const std::string& svg_path) {
    if (runs.empty()) throw ConfigError("emit_curves needs at least one run");
    if (runs.size() != names.size()) throw ConfigError("one name per run required");
    std::size_t n_epochs = runs[0].size();
    for (const auto& r : runs) n_epochs = std::min(n_epochs, r.size());
    if (n_epochs == 0) throw ConfigError("empty run log");

    std::ofstream csv(csv_path);
    if (!csv) throw FormatError("cannot write '" + csv_path + "'");
    csv << "epoch";
    for (const std::string& n : names) csv << ',' << n;
    csv << ",mean\n";
    std::vector<double> means(n_epochs, 0.0);
    for (std::size_t e = 0; e < n_epochs; ++e) {
        csv << runs[0][e].epoch;
        double acc = 0.0;
        for (const auto& r : runs) {
            csv << ',' << fmt(r[e].val_dsc);
            acc += r[e].val_dsc;
        }
        means[e] = acc / static_cast<double>(runs.size());
        csv << ',' << fmt(means[e]) << '\n';
    }
    csv.close();

    // minimal SVG line plot of validation DSC per epoch
    const int width = 640, height = 420, ml = 50, mr = 140, mt = 20, mb = 40;
    const double px = ml, py = mt;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto xmap = [&](double e) {
        return px + (n_epochs > 1 ? pw * e / static_cast<double>(n_epochs - 1) : pw / 2);
    };
    auto ymap = [&](double v) { return py + ph * (1.0 - std::clamp(v, 0.0, 1.0)); };
    const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                             "#8c564b", "#e377c2", "#7f7f7f"};

    std::ofstream svg(svg_path);
    if (!svg) throw FormatError("cannot write '" + svg_path + "'");
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<line x1='" << px << "' y1='" << py + ph << "' x2='" << px + pw << "' y2='" << py + ph
        << "' stroke='black'/>\n";
    svg << "<line x1='" << px << "' y1='" << py << "' x2='" << px << "' y2='" << py + ph
        << "' stroke='black'/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double v = tick / 5.0;
        svg << "<text x='" << px - 8 << "' y='" << ymap(v) + 4
            << "' font-size='11' text-anchor='end'>" << fmt(v) << "</text>\n";
        svg << "<line x1='" << px - 4 << "' y1='" << ymap(v) << "' x2='" << px << "' y2='" << ymap(v)
            << "' stroke='black'/>\n";
    }
    svg << "<text x='" << px + pw / 2 << "' y='" << height - 8
        << "' font-size='12' text-anchor='middle'>epoch</text>\n";
    svg << "<text x='14' y='" << py + ph / 2
        << "' font-size='12' text-anchor='middle' transform='rotate(-90 14 " << py + ph / 2
        << ")'>val DSC</text>\n";

    auto draw_series = [&](const std::vector<double>& ys, const std::string& color,
                           const std::string& name, int slot, const std::string& dash) {
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5'";
        if (!dash.empty()) svg << " stroke-dasharray='" << dash << "'";
        svg << " points='";
        for (std::size_t e = 0; e < ys.size(); ++e)
            svg << xmap(static_cast<double>(e)) << ',' << ymap(ys[e]) << ' ';
        svg << "'/>\n";
        const double ly = mt + 14 * (slot + 1);
        svg << "<line x1='" << width - mr + 10 << "' y1='" << ly << "' x2='" << width - mr + 30
            << "' y2='" << ly << "' stroke='" << color << "' stroke-width='1.5'";
        if (!dash.empty()) svg << " stroke-dasharray='" << dash << "'";
        svg << "/>\n<text x='" << width - mr + 35 << "' y='" << ly + 4 << "' font-size='11'>" << name
            << "</text>\n";
    };

    for (std::size_t r = 0; r < runs.size(); ++r) {
        std::vector<double> ys(n_epochs);
        for (std::size_t e = 0; e < n_epochs; ++e) ys[e] = runs[r][e].val_dsc;
        draw_series(ys, palette[r % 8], names[r], static_cast<int>(r), "");
    }
    if (runs.size() > 1) draw_series(means, "#000000", "mean", static_cast<int>(runs.size()), "5,3");
    svg << "</svg>\n";
}

} // namespace blseg
