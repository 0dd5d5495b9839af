#include "blseg/edt.hpp"

#include <cmath>
#include <vector>

namespace blseg {
namespace detail {

// Felzenszwalb-Huttenlocher lower envelope over parabolas rooted at
// x_i = i*step with heights f[i]. Skips absent parabolas so that lines
// without any finite entry stay at infinity without producing NaNs.
void edt_1d(const double* f, double* out, int n, double step, double* z, int* v, double* fx) {
    int k = -1;
    for (int i = 0; i < n; ++i) {
        if (f[i] >= kEdtInf) continue;
        const double x = i * step;
        const double fi = f[i];
        while (k >= 0) {
            const double xv = v[k] * step;
            // Intersection of parabola i with the current rightmost one.
            const double s = ((fi + x * x) - (fx[k] + xv * xv)) / (2.0 * (x - xv));
            if (k >= 1 && s <= z[k]) {
                --k;
            } else {
                ++k;
                v[k] = i;
                fx[k] = fi;
                z[k] = (k == 0) ? -kEdtInf : s;
                break;
            }
        }
        if (k < 0) {
            k = 0;
            v[0] = i;
            fx[0] = fi;
            z[0] = -kEdtInf;
        }
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) out[q] = kEdtInf;
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        const double x = q * step;
        while (j < k && z[j + 1] < x) ++j;
        const double d = x - v[j] * step;
        out[q] = d * d + fx[j];
    }
}

namespace {

// Squared transform along one axis of a row-major volume, in place.
void pass_axis(std::vector<double>& sq, const Shape& shape, const Spacing& spacing, int axis) {
    const int nd = static_cast<int>(shape.size());
    const int n = shape[static_cast<std::size_t>(axis)];
    std::int64_t stride = 1;
    for (int a = axis + 1; a < nd; ++a) stride *= shape[static_cast<std::size_t>(a)];
    std::int64_t outer = 1;
    for (int a = 0; a < nd; ++a)
        if (a != axis) outer *= shape[static_cast<std::size_t>(a)];

    std::vector<double> line(static_cast<std::size_t>(n));
    std::vector<double> out(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);
    std::vector<double> fx(static_cast<std::size_t>(n));
    std::vector<int> v(static_cast<std::size_t>(n));

    const double step = spacing[static_cast<std::size_t>(axis)];
    const std::int64_t block = stride * n;
    for (std::int64_t o = 0; o < outer; ++o) {
        // Walk the o-th line: lines are enumerated by (chunk, offset) around the axis.
        const std::int64_t chunk = o / stride;
        const std::int64_t off = o % stride;
        const std::int64_t base = chunk * block + off;
        for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i)] = sq[static_cast<std::size_t>(base + i * stride)];
        edt_1d(line.data(), out.data(), n, step, z.data(), v.data(), fx.data());
        for (int i = 0; i < n; ++i) sq[static_cast<std::size_t>(base + i * stride)] = out[static_cast<std::size_t>(i)];
    }
}

} // namespace
} // namespace detail

ScalarGrid edt(const BinaryMask& features) {
    features.validate();
    if (features.empty_mask()) throw EmptyFeatureSet("edt: mask has no feature pixels");

    std::vector<double> sq(features.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        sq[i] = features.values[i] ? 0.0 : detail::kEdtInf;

    for (int axis = 0; axis < features.ndim(); ++axis)
        detail::pass_axis(sq, features.shape, features.spacing, axis);

    ScalarGrid out(features.shape, features.spacing);
    for (std::size_t i = 0; i < sq.size(); ++i) out.values[i] = std::sqrt(sq[i]);
    return out;
}

PerSliceEdt edt_per_slice(const BinaryMask& features) {
    features.validate();
    if (features.ndim() != 3) throw ShapeError("edt_per_slice expects a 3-D mask");

    const int nz = features.shape[0], ny = features.shape[1], nx = features.shape[2];
    PerSliceEdt result;
    result.distance = ScalarGrid(features.shape, features.spacing);
    result.empty_slice.assign(static_cast<std::size_t>(nz), 0);

    BinaryMask slice({ny, nx}, {features.spacing[1], features.spacing[2]});
    for (int z = 0; z < nz; ++z) {
        const std::int64_t base = static_cast<std::int64_t>(z) * ny * nx;
        bool any = false;
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(ny) * nx; ++i) {
            slice.values[static_cast<std::size_t>(i)] = features.values[static_cast<std::size_t>(base + i)];
            any = any || slice.values[static_cast<std::size_t>(i)];
        }
        if (!any) {
            result.empty_slice[static_cast<std::size_t>(z)] = 1;
            continue;  // zeros, resolved by the caller
        }
        const ScalarGrid d = edt(slice);
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(ny) * nx; ++i)
            result.distance.values[static_cast<std::size_t>(base + i)] = d.values[static_cast<std::size_t>(i)];
    }
    return result;
}

} // namespace blseg
