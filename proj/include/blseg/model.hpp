#ifndef BLSEG_MODEL_HPP
#define BLSEG_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "blseg/grid.hpp"

namespace blseg {

// Fixed-topology encoder-decoder, fully hand-differentiated:
//   conv3x3(C_in->8) ReLU, conv3x3(8->8) ReLU, maxpool2,
//   conv3x3(8->16) ReLU, nearest-upsample x2, concat(skip 8 + 16 = 24),
//   conv3x3(24->8) ReLU, conv1x1(8->2), softmax over the 2 channels.
// Zero padding keeps spatial dims; inputs must have even height/width.

struct ConvLayer {
    int in_ch = 0, out_ch = 0, k = 0;
    std::vector<double> w;  // [out][in][ky][kx]
    std::vector<double> b;  // [out]
};

struct TinySegNet {
    int in_channels = 1;
    ConvLayer c1, c2, c3, c4, c5;

    static TinySegNet create(int in_channels, std::uint64_t seed);

    std::size_t param_count() const;
    std::vector<double> flatten_params() const;
    void load_params(const std::vector<double>& flat);
};

// One image (or a stack of input channels) in [C][H][W] order.
struct ModelInput {
    int channels = 0, height = 0, width = 0;
    std::vector<double> data;
};

// Activations retained for the backward pass of a single sample.
struct SampleCache {
    int h = 0, w = 0;
    std::vector<double> input;      // [C_in][H][W]
    std::vector<double> a1, a2;     // post-ReLU, 8 channels at full res
    std::vector<double> pooled;     // 8 at half res
    std::vector<int> pool_arg;      // flat argmax index into a2 per pooled cell
    std::vector<double> a3;         // post-ReLU, 16 at half res
    std::vector<double> up;         // 16 at full res
    std::vector<double> cat;        // 24 at full res
    std::vector<double> a4;         // post-ReLU, 8 at full res
    std::vector<double> logits;     // 2 at full res
    std::vector<double> prob_fg;    // softmax foreground channel
};

struct ForwardResult {
    std::vector<ProbMap> prob;          // one per batch item
    std::vector<SampleCache> cache;     // matching entries
    std::uint64_t revision = 0;         // parameter revision the cache belongs to
};

class Model {
public:
    explicit Model(TinySegNet net) : net_(std::move(net)) {}

    const TinySegNet& net() const { return net_; }
    TinySegNet& net() { return net_; }

    // Deterministic forward over a batch; spatial dims must be even and
    // channels must match C_in.
    ForwardResult forward(const std::vector<ModelInput>& batch, const Spacing& spacing) const;

    // Exact reverse-mode gradients of sum_i loss_i given d(loss)/d(prob_fg)
    // per batch item. The cache must come from a forward at the current
    // parameter revision, otherwise CacheError.
    std::vector<double> backward(const ForwardResult& fwd,
                                 const std::vector<ScalarGrid>& grad_wrt_prob) const;

    // Bumps the revision; call after any parameter mutation.
    void mark_params_changed() { ++revision_; }
    std::uint64_t revision() const { return revision_; }

private:
    TinySegNet net_;
    std::uint64_t revision_ = 0;
};

struct AdamState {
    std::vector<double> m, v;
    std::int64_t step = 0;
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState create(std::size_t n_params, double lr = 0.001);
};

// Standard Adam update with bias correction; throws NonFiniteGradient on
// non-finite inputs.
void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grads);

// Halves the learning rate when the metric has not strictly improved over
// the best seen within the last `patience` epochs. Mirrors replaying the
// whole history through PlateauScheduler.
class PlateauScheduler {
public:
    explicit PlateauScheduler(int patience = 20) : patience_(patience) {}
    // Returns true when the lr was halved at this observation.
    bool observe(double metric, double& lr);

private:
    int patience_;
    int bad_ = 0;
    bool has_best_ = false;
    double best_ = 0.0;
};

double lr_on_plateau(const std::vector<double>& history, int patience, double lr0);

// Checkpoint: "TSNET v1" header, parameter blob, Adam state (little-endian
// f64 payloads as in the grid format).
void save_checkpoint(const std::string& path, const TinySegNet& net, const AdamState& adam);
void load_checkpoint(const std::string& path, TinySegNet& net, AdamState& adam);

} // namespace blseg

#endif // BLSEG_MODEL_HPP
