#ifndef BLSEG_EDT_HPP
#define BLSEG_EDT_HPP

#include "blseg/grid.hpp"

namespace blseg {

// Exact Euclidean distance transform: value at q is the spacing-weighted
// distance (mm) from q's pixel center to the nearest feature-pixel center.
// Separable lower-envelope transform on squared distances, one pass per
// axis with that axis's squared spacing folded into the parabola offsets.
// Throws EmptyFeatureSet when the mask has no feature pixels.
ScalarGrid edt(const BinaryMask& features);

// Per-slice transform of a 3-D mask: every z-slice is transformed
// independently with its in-plane (y, x) spacing. Slices without feature
// pixels are left as zeros and flagged; the caller decides the fallback
// (the level-set builder maps them to zero maps).
struct PerSliceEdt {
    ScalarGrid distance;
    std::vector<std::uint8_t> empty_slice;
};

PerSliceEdt edt_per_slice(const BinaryMask& features);

namespace detail {
// One lower-envelope pass over a line of squared distances sampled at
// positions i*step. Entries >= kEdtInf are treated as absent parabolas.
inline constexpr double kEdtInf = 1e300;
void edt_1d(const double* f, double* out, int n, double step, double* z_buf, int* v_buf, double* f_buf);
} // namespace detail

} // namespace blseg

#endif // BLSEG_EDT_HPP
