#include "blseg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "blseg/edt.hpp"
#include "blseg/levelset.hpp"

namespace blseg {

double dsc(const BinaryMask& pred, const BinaryMask& g) {
    if (!same_geometry(pred, g)) throw ShapeError("dsc: mask geometries differ");
    std::int64_t inter = 0, np = 0, ng = 0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        inter += pred.values[i] & g.values[i];
        np += pred.values[i];
        ng += g.values[i];
    }
    if (np + ng == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(np + ng);
}

double percentile_linear(std::vector<double> values, double p) {
    if (values.empty()) throw ShapeError("percentile of empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p / 100.0;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

double domain_diagonal(const BinaryMask& m) {
    double acc = 0.0;
    for (std::size_t a = 0; a < m.shape.size(); ++a) {
        const double ext = (m.shape[a] - 1) * m.spacing[a];
        acc += ext * ext;
    }
    return std::sqrt(acc);
}

// Directed 95th percentile of distances from `from` boundary pixels to
// the nearest `to` boundary pixel, via an EDT of the `to` set.
double directed95(const std::vector<std::int64_t>& from, const std::vector<std::int64_t>& to,
                  const BinaryMask& geometry) {
    BinaryMask to_mask(geometry.shape, geometry.spacing);
    for (std::int64_t i : to) to_mask.values[static_cast<std::size_t>(i)] = 1;
    const ScalarGrid d = edt(to_mask);
    std::vector<double> dist;
    dist.reserve(from.size());
    for (std::int64_t i : from) dist.push_back(d.values[static_cast<std::size_t>(i)]);
    return percentile_linear(std::move(dist), 95.0);
}

} // namespace

double hd95(const BinaryMask& pred, const BinaryMask& g, bool* sentinel) {
    if (!same_geometry(pred, g)) throw ShapeError("hd95: mask geometries differ");
    if (sentinel) *sentinel = false;

    const std::vector<std::int64_t> bp = boundary(pred);
    const std::vector<std::int64_t> bg = boundary(g);
    if (bp.empty() || bg.empty()) {
        if (sentinel) *sentinel = true;
        return domain_diagonal(g);
    }
    const double d_pg = directed95(bp, bg, g);
    const double d_gp = directed95(bg, bp, g);
    return std::max(d_pg, d_gp);
}

void EvalReport::add(double dsc_value, double hd95_value, bool sentinel_flag) {
    dsc_cases.push_back(dsc_value);
    hd95_cases.push_back(hd95_value);
    hd95_sentinel.push_back(sentinel_flag ? 1 : 0);
}

void EvalReport::finalize() {
    auto mean = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc / static_cast<double>(v.size());
    };
    dsc_mean = mean(dsc_cases);
    hd95_mean = mean(hd95_cases);
}

RunSummary summarize_runs(const std::vector<double>& per_run_values) {
    RunSummary s;
    if (per_run_values.empty()) return s;
    for (double v : per_run_values) s.mean += v;
    s.mean /= static_cast<double>(per_run_values.size());
    double acc = 0.0;
    for (double v : per_run_values) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(per_run_values.size()));
    return s;
}

} // namespace blseg
