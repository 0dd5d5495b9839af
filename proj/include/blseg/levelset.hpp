#ifndef BLSEG_LEVELSET_HPP
#define BLSEG_LEVELSET_HPP

#include <cstdint>
#include <vector>

#include "blseg/grid.hpp"

namespace blseg {

enum class DistanceMode { per_slice_2d, full_3d };

// Signed level-set map phi_G: negative inside G, positive outside, with
// |phi(q)| the distance from q's pixel center to the nearest pixel center
// of the complementary region. Degenerate regions (empty or full, per
// slice in per_slice_2d mode) produce a zero map. Interior boundary
// pixels therefore carry -(min spacing), never 0.
ScalarGrid signed_distance(const BinaryMask& g, DistanceMode mode);

// Foreground pixels with at least one face-adjacent background pixel
// (4-connectivity in 2D, 6 in 3D). The domain border does not count as
// background. Returns linear indices.
std::vector<std::int64_t> boundary(const BinaryMask& g);

// Numerical estimate of the contour-to-contour L2 change: sample points
// on the sub-pixel interface of G, cast rays along the outward normal
// (from the smoothed central-difference gradient of phi_G), find the
// crossing with the interface of S, and accumulate squared displacements
// weighted by each sample's boundary-length element. 2-D masks only.
struct RayStats {
    int attempted = 0;
    int failed = 0;
};

double boundary_change_differential(const BinaryMask& G, const BinaryMask& S, int n_rays,
                                    RayStats* stats = nullptr);

// Regional form of the same quantity: 2 * sum over the symmetric
// difference of |phi_G| times the voxel volume. Equals
// 2*|Omega|*voxelvol*(L_B(S) - L_B(G)) identically.
double boundary_change_integral(const BinaryMask& G, const BinaryMask& S);

} // namespace blseg

#endif // BLSEG_LEVELSET_HPP
