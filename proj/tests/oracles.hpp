#ifndef BLSEG_TESTS_ORACLES_HPP
#define BLSEG_TESTS_ORACLES_HPP

// Independent reference implementations used to freeze expected values.
// Everything here is deliberately brute force and shares no code with the
// library paths it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "blseg/grid.hpp"
#include "blseg/rng.hpp"

namespace oracle {

using blseg::BinaryMask;
using blseg::ProbMap;
using blseg::ScalarGrid;

// Physical coordinates of a linear index.
inline std::vector<double> coords(const blseg::Shape& shape, const blseg::Spacing& spacing,
                                  std::int64_t idx) {
    const int nd = static_cast<int>(shape.size());
    std::vector<double> c(static_cast<std::size_t>(nd));
    for (int a = nd - 1; a >= 0; --a) {
        c[static_cast<std::size_t>(a)] =
            static_cast<double>(idx % shape[static_cast<std::size_t>(a)]) * spacing[static_cast<std::size_t>(a)];
        idx /= shape[static_cast<std::size_t>(a)];
    }
    return c;
}

// O(n^2) exact distance transform: min over all feature pixels.
inline ScalarGrid brute_edt(const BinaryMask& mask) {
    ScalarGrid out(mask.shape, mask.spacing);
    std::vector<std::int64_t> features;
    for (std::int64_t i = 0; i < mask.size(); ++i)
        if (mask.values[static_cast<std::size_t>(i)]) features.push_back(i);
    std::vector<std::vector<double>> fpos;
    fpos.reserve(features.size());
    for (std::int64_t f : features) fpos.push_back(coords(mask.shape, mask.spacing, f));
    for (std::int64_t i = 0; i < mask.size(); ++i) {
        const auto p = coords(mask.shape, mask.spacing, i);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : fpos) {
            double acc = 0.0;
            for (std::size_t a = 0; a < p.size(); ++a) acc += (p[a] - f[a]) * (p[a] - f[a]);
            best = std::min(best, acc);
        }
        out.values[static_cast<std::size_t>(i)] = std::sqrt(best);
    }
    return out;
}

// Signed map via brute-force nearest-opposite-pixel search.
inline ScalarGrid brute_signed_distance(const BinaryMask& g) {
    ScalarGrid phi(g.shape, g.spacing);
    const std::int64_t n_fg = g.count();
    if (n_fg == 0 || n_fg == g.size()) return phi;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        const auto p = coords(g.shape, g.spacing, i);
        const bool inside = g.values[static_cast<std::size_t>(i)] != 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t j = 0; j < g.size(); ++j) {
            if ((g.values[static_cast<std::size_t>(j)] != 0) == inside) continue;
            const auto q = coords(g.shape, g.spacing, j);
            double acc = 0.0;
            for (std::size_t a = 0; a < p.size(); ++a) acc += (p[a] - q[a]) * (p[a] - q[a]);
            best = std::min(best, acc);
        }
        phi.values[static_cast<std::size_t>(i)] = inside ? -std::sqrt(best) : std::sqrt(best);
    }
    return phi;
}

// Boundary pixels by definition: foreground with a face-adjacent
// background pixel, domain border not background.
inline std::vector<std::int64_t> brute_boundary(const BinaryMask& g) {
    std::vector<std::int64_t> out;
    const int nd = g.ndim();
    std::vector<int> shape = g.shape;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        if (!g.values[static_cast<std::size_t>(i)]) continue;
        std::vector<int> c(static_cast<std::size_t>(nd));
        std::int64_t rem = i;
        for (int a = nd - 1; a >= 0; --a) {
            c[static_cast<std::size_t>(a)] = static_cast<int>(rem % shape[static_cast<std::size_t>(a)]);
            rem /= shape[static_cast<std::size_t>(a)];
        }
        bool is_boundary = false;
        for (int a = 0; a < nd && !is_boundary; ++a)
            for (int d = -1; d <= 1 && !is_boundary; d += 2) {
                std::vector<int> nb = c;
                nb[static_cast<std::size_t>(a)] += d;
                if (nb[static_cast<std::size_t>(a)] < 0 ||
                    nb[static_cast<std::size_t>(a)] >= shape[static_cast<std::size_t>(a)])
                    continue;
                std::int64_t j = 0;
                for (int b = 0; b < nd; ++b)
                    j = j * shape[static_cast<std::size_t>(b)] + nb[static_cast<std::size_t>(b)];
                if (!g.values[static_cast<std::size_t>(j)]) is_boundary = true;
            }
        if (is_boundary) out.push_back(i);
    }
    return out;
}

// Linear-interpolated percentile, reimplemented.
inline double brute_percentile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * p / 100.0;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

// All-pairs directed 95th-percentile boundary distance.
inline double brute_hd95(const BinaryMask& pred, const BinaryMask& g) {
    const auto bp = brute_boundary(pred);
    const auto bg = brute_boundary(g);
    if (bp.empty() || bg.empty()) {
        double acc = 0.0;
        for (std::size_t a = 0; a < g.shape.size(); ++a) {
            const double e = (g.shape[a] - 1) * g.spacing[a];
            acc += e * e;
        }
        return std::sqrt(acc);
    }
    auto directed = [&](const std::vector<std::int64_t>& from, const std::vector<std::int64_t>& to) {
        std::vector<double> dists;
        dists.reserve(from.size());
        for (std::int64_t i : from) {
            const auto p = coords(g.shape, g.spacing, i);
            double best = std::numeric_limits<double>::infinity();
            for (std::int64_t j : to) {
                const auto q = coords(g.shape, g.spacing, j);
                double acc = 0.0;
                for (std::size_t a = 0; a < p.size(); ++a) acc += (p[a] - q[a]) * (p[a] - q[a]);
                best = std::min(best, acc);
            }
            dists.push_back(std::sqrt(best));
        }
        return brute_percentile(std::move(dists), 95.0);
    };
    return std::max(directed(bp, bg), directed(bg, bp));
}

// Central finite differences of a scalar function of one grid entry.
// Returns the FD gradient for every pixel of `s`.
inline std::vector<double> fd_gradient(const std::function<double(const ProbMap&)>& f, ProbMap s,
                                       double h = 1e-6) {
    std::vector<double> grad(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double orig = s.values[i];
        s.values[i] = orig + h;
        const double fp = f(s);
        s.values[i] = orig - h;
        const double fm = f(s);
        s.values[i] = orig;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

// Relative-error comparison with an absolute floor covering FD roundoff
// noise: pass when |a-b| <= max(tol*max(|a|,|b|), floor).
inline bool grads_match(const std::vector<double>& analytic, const std::vector<double>& fd,
                        double tol, double* worst = nullptr) {
    double scale = 0.0;
    for (double v : analytic) scale = std::max(scale, std::abs(v));
    for (double v : fd) scale = std::max(scale, std::abs(v));
    const double floor = 1e-8 * (1.0 + scale);
    bool ok = true;
    double w = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double diff = std::abs(analytic[i] - fd[i]);
        const double rel = diff / std::max({std::abs(analytic[i]), std::abs(fd[i]), floor});
        w = std::max(w, rel);
        if (diff > std::max(tol * std::max(std::abs(analytic[i]), std::abs(fd[i])), floor)) ok = false;
    }
    if (worst) *worst = w;
    return ok;
}

// Random proper (nonempty, non-full) mask.
inline BinaryMask random_mask(blseg::Rng& rng, const blseg::Shape& shape,
                              const blseg::Spacing& spacing, double density = 0.5) {
    BinaryMask m(shape, spacing);
    for (auto& v : m.values) v = rng.uniform() < density ? 1 : 0;
    if (m.empty_mask()) m.values[static_cast<std::size_t>(rng.uniform_int(0, m.size() - 1))] = 1;
    if (m.full_mask()) m.values[static_cast<std::size_t>(rng.uniform_int(0, m.size() - 1))] = 0;
    return m;
}

inline ProbMap random_prob(blseg::Rng& rng, const blseg::Shape& shape,
                           const blseg::Spacing& spacing, double lo = 0.02, double hi = 0.98) {
    ProbMap p(shape, spacing);
    for (auto& v : p.values) v = rng.uniform(lo, hi);
    return p;
}

} // namespace oracle

#endif // BLSEG_TESTS_ORACLES_HPP
