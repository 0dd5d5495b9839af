#include "blseg/losses.hpp"

#include <algorithm>
#include <cmath>

#include "blseg/levelset.hpp"

namespace blseg {
namespace {

void require_same_geometry(const ProbMap& s, const BinaryMask& g) {
    if (!same_geometry(s, g)) throw ShapeError("probability map and mask geometries differ");
}

double clamp_prob(double v, double eps) { return std::clamp(v, eps, 1.0 - eps); }

} // namespace

void HyperParams::validate() const {
    if (w0 < 0.0) throw ConfigError("w0 must be >= 0");
    if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
    if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
    if (beta < 0.0) throw ConfigError("beta must be >= 0");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
}

LossResult boundary_loss(const ProbMap& s, const ScalarGrid& phi) {
    if (!same_geometry(s, phi)) throw ShapeError("probability map and level set geometries differ");
    const double n = static_cast<double>(s.size());
    LossResult r;
    r.grad = ScalarGrid(s.shape, s.spacing);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        acc += phi.values[i] * s.values[i];
        r.grad.values[i] = phi.values[i] / n;
    }
    r.value = acc / n;
    return r;
}

LossResult gdl(const ProbMap& s, const BinaryMask& g, double eps) {
    require_same_geometry(s, g);
    const std::size_t n = s.values.size();

    double sum_g = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum_g += g.values[i];
    const double sum_b = static_cast<double>(n) - sum_g;
    const double wg = 1.0 / ((sum_g + eps) * (sum_g + eps));
    const double wb = 1.0 / ((sum_b + eps) * (sum_b + eps));

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sv = s.values[i], gv = g.values[i];
        num += wg * gv * sv + wb * (1.0 - gv) * (1.0 - sv);
        den += wg * (sv + gv) + wb * (2.0 - sv - gv);
    }

    LossResult r;
    r.value = 1.0 - 2.0 * num / (den + eps);
    r.grad = ScalarGrid(s.shape, s.spacing);
    // quotient rule; weights are constants of g
    const double den_eps = den + eps;
    const double dden = wg - wb;  // d(den)/ds_p, same at every pixel
    for (std::size_t i = 0; i < n; ++i) {
        const double gv = g.values[i];
        const double dnum = wg * gv - wb * (1.0 - gv);
        r.grad.values[i] = -2.0 * (dnum * den_eps - num * dden) / (den_eps * den_eps);
    }
    return r;
}

LossResult weighted_ce(const ProbMap& s, const BinaryMask& g, const ScalarGrid& D,
                       double w0, double sigma, double eps) {
    require_same_geometry(s, g);
    if (!same_geometry(s, D)) throw ShapeError("distance map geometry differs");
    const std::size_t n = s.values.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    double sum_g = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum_g += g.values[i];
    const double w_fg = sum_g * inv_n;          // class frequencies
    const double w_bg = 1.0 - w_fg;
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);

    LossResult r;
    r.grad = ScalarGrid(s.shape, s.spacing);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d2 = D.values[i] * D.values[i];
        const double bump = w0 * std::exp(-d2 * inv2s2);
        const double u_fg = g.values[i] ? (w_fg + bump) : 0.0;
        const double u_bg = g.values[i] ? 0.0 : (w_bg + bump);
        const double sc = clamp_prob(s.values[i], eps);
        acc -= u_fg * std::log(sc) + u_bg * std::log(1.0 - sc);
        r.grad.values[i] = (-u_fg / sc + u_bg / (1.0 - sc)) * inv_n;
    }
    r.value = acc * inv_n;
    return r;
}

LossResult focal(const ProbMap& s, const BinaryMask& g, double gamma, double eps) {
    require_same_geometry(s, g);
    const std::size_t n = s.values.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    LossResult r;
    r.grad = ScalarGrid(s.shape, s.spacing);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = clamp_prob(s.values[i], eps);
        if (g.values[i]) {
            const double mod = std::pow(1.0 - sc, gamma);
            acc -= mod * std::log(sc);
            // d/ds [ (1-s)^g log s ] = -g (1-s)^(g-1) log s + (1-s)^g / s
            const double dmod = gamma > 0.0 ? gamma * std::pow(1.0 - sc, gamma - 1.0) : 0.0;
            r.grad.values[i] = (dmod * std::log(sc) - mod / sc) * inv_n;
        } else {
            const double mod = std::pow(sc, gamma);
            acc -= mod * std::log(1.0 - sc);
            const double dmod = gamma > 0.0 ? gamma * std::pow(sc, gamma - 1.0) : 0.0;
            r.grad.values[i] = (-dmod * std::log(1.0 - sc) + mod / (1.0 - sc)) * inv_n;
        }
    }
    r.value = acc * inv_n;
    return r;
}

LossResult hausdorff_loss(const ProbMap& s, const BinaryMask& g, double beta, double delta) {
    require_same_geometry(s, g);
    const std::size_t n = s.values.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    // Unsigned distances to each region's interface; degenerate masks give
    // zero maps via the level-set fallback rule.
    const ScalarGrid phi_g = signed_distance(g, DistanceMode::full_3d);
    const BinaryMask s_mask = threshold(s, delta);
    const ScalarGrid phi_s = signed_distance(s_mask, DistanceMode::full_3d);

    LossResult r;
    r.grad = ScalarGrid(s.shape, s.spacing);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dg = std::abs(phi_g.values[i]);
        const double ds = std::abs(phi_s.values[i]);
        const double w = std::pow(dg, beta) + std::pow(ds, beta);
        const double e = g.values[i] - s.values[i];
        acc += e * e * w;
        r.grad.values[i] = 2.0 * (s.values[i] - g.values[i]) * w * inv_n;
    }
    r.value = acc * inv_n;
    return r;
}

LossResult regional_loss(const ProbMap& s, const BinaryMask& g, const ScalarGrid& phi,
                         RegionalLoss which, const HyperParams& hp) {
    switch (which) {
        case RegionalLoss::gdl: return gdl(s, g, hp.epsilon);
        case RegionalLoss::weighted_ce: {
            ScalarGrid D(phi.shape, phi.spacing);
            for (std::size_t i = 0; i < phi.values.size(); ++i) D.values[i] = std::abs(phi.values[i]);
            return weighted_ce(s, g, D, hp.w0, hp.sigma, hp.epsilon);
        }
        case RegionalLoss::focal: return focal(s, g, hp.gamma, hp.epsilon);
    }
    throw ConfigError("unknown regional loss");
}

LossResult combined(const ProbMap& s, const BinaryMask& g, const ScalarGrid& phi,
                    RegionalLoss regional, std::pair<double, double> weights,
                    const HyperParams& hp) {
    const auto [w_r, w_b] = weights;
    LossResult reg = regional_loss(s, g, phi, regional, hp);
    LossResult bnd = boundary_loss(s, phi);
    LossResult r;
    r.value = w_r * reg.value + w_b * bnd.value;
    r.grad = ScalarGrid(s.shape, s.spacing);
    for (std::size_t i = 0; i < r.grad.values.size(); ++i)
        r.grad.values[i] = w_r * reg.grad.values[i] + w_b * bnd.grad.values[i];
    return r;
}

} // namespace blseg
