#ifndef BLSEG_LOSSES_HPP
#define BLSEG_LOSSES_HPP

#include <utility>

#include "blseg/grid.hpp"

namespace blseg {

// Every loss returns its scalar value plus the analytic gradient with
// respect to the foreground probability map, so each one can be
// finite-difference checked in isolation. The softmax/logit chain rule
// lives in the model. Reduction is mean-over-pixels throughout.
struct LossResult {
    double value = 0.0;
    ScalarGrid grad;
};

struct HyperParams {
    double w0 = 10.0;       // distance-weighted CE amplitude
    double sigma = 5.0;     // distance-weighted CE bandwidth (mm)
    double gamma = 2.0;     // focal exponent
    double beta = 2.0;      // Hausdorff-loss distance exponent
    double epsilon = 1e-10; // probability clamp / denominator guard
    double delta = 0.5;     // probability threshold for S_theta

    void validate() const;
};

// value = mean_q phi(q) * s(q); grad = phi / |Omega|.
LossResult boundary_loss(const ProbMap& s, const ScalarGrid& phi);

// Generalized Dice loss, two regions, per-image inverse-squared class
// size weights; eps guards the weights and the final ratio.
LossResult gdl(const ProbMap& s, const BinaryMask& g, double eps = 1e-10);

// Distance-weighted cross-entropy. D is the unsigned distance to the
// foreground/background interface (|phi_G|); both classes share it. The
// per-pixel weight is u_c(p) = g_c(p) * [w_c + w0 * exp(-D(p)^2 / (2 sigma^2))]
// with w_c the class frequency.
LossResult weighted_ce(const ProbMap& s, const BinaryMask& g, const ScalarGrid& D,
                       double w0, double sigma, double eps = 1e-10);

// Focal loss over the two softmax channels.
LossResult focal(const ProbMap& s, const BinaryMask& g, double gamma, double eps = 1e-10);

// value = mean_q (g - s)^2 (D_G^beta + D_S^beta); D_S is recomputed from
// threshold(s, delta) at every call and both maps are treated as
// constants by the gradient. Degenerate masks fall back to zero maps.
LossResult hausdorff_loss(const ProbMap& s, const BinaryMask& g, double beta, double delta);

enum class RegionalLoss { gdl, weighted_ce, focal };

// w_R * regional + w_B * boundary, linear in both values and gradients.
LossResult combined(const ProbMap& s, const BinaryMask& g, const ScalarGrid& phi,
                    RegionalLoss regional, std::pair<double, double> weights,
                    const HyperParams& hp);

LossResult regional_loss(const ProbMap& s, const BinaryMask& g, const ScalarGrid& phi,
                         RegionalLoss which, const HyperParams& hp);

} // namespace blseg

#endif // BLSEG_LOSSES_HPP
