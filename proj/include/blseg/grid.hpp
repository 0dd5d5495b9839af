#ifndef BLSEG_GRID_HPP
#define BLSEG_GRID_HPP

#include <cstdint>
#include <vector>

#include "blseg/errors.hpp"

namespace blseg {

// Axis order is (y, x) in 2D and (z, y, x) in 3D, row-major, so that
// distance maps, level sets and gradient grids linearize identically
// across modules.
using Shape = std::vector<int>;
using Spacing = std::vector<double>;

std::int64_t element_count(const Shape& shape);
double voxel_volume(const Spacing& spacing);
void check_geometry(const Shape& shape, const Spacing& spacing);

// N-D (N in {2,3}) array of reals with per-axis physical spacing in mm.
// Holds images, distance maps, level sets and loss gradients.
struct ScalarGrid {
    Shape shape;
    Spacing spacing;
    std::vector<double> values;

    ScalarGrid() = default;
    ScalarGrid(Shape s, Spacing sp, double fill = 0.0);

    int ndim() const { return static_cast<int>(shape.size()); }
    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }

    std::int64_t index(int y, int x) const {
        return static_cast<std::int64_t>(y) * shape[1] + x;
    }
    std::int64_t index(int z, int y, int x) const {
        return (static_cast<std::int64_t>(z) * shape[1] + y) * shape[2] + x;
    }

    double& at(std::int64_t i) { return values[static_cast<std::size_t>(i)]; }
    double at(std::int64_t i) const { return values[static_cast<std::size_t>(i)]; }

    // Enforces the type invariants: 2 or 3 axes, positive finite spacing,
    // value count matching the shape, all values finite.
    void validate() const;
};

// N-D array over {0,1}; ground truth g and thresholded predictions.
struct BinaryMask {
    Shape shape;
    Spacing spacing;
    std::vector<std::uint8_t> values;

    BinaryMask() = default;
    BinaryMask(Shape s, Spacing sp, std::uint8_t fill = 0);

    int ndim() const { return static_cast<int>(shape.size()); }
    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }

    std::int64_t index(int y, int x) const {
        return static_cast<std::int64_t>(y) * shape[1] + x;
    }
    std::int64_t index(int z, int y, int x) const {
        return (static_cast<std::int64_t>(z) * shape[1] + y) * shape[2] + x;
    }

    std::int64_t count() const;  // number of 1s
    bool empty_mask() const { return count() == 0; }
    bool full_mask() const { return count() == size(); }

    void validate() const;
};

// N-D array in [0,1]; the foreground softmax channel s_theta.
struct ProbMap {
    Shape shape;
    Spacing spacing;
    std::vector<double> values;

    ProbMap() = default;
    ProbMap(Shape s, Spacing sp, double fill = 0.0);

    int ndim() const { return static_cast<int>(shape.size()); }
    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }

    void validate() const;
};

template <typename A, typename B>
bool same_geometry(const A& a, const B& b) {
    return a.shape == b.shape && a.spacing == b.spacing;
}

// S_theta = { p : s(p) >= delta }. Throws InvalidThreshold unless 0 < delta < 1.
BinaryMask threshold(const ProbMap& p, double delta);

} // namespace blseg

#endif // BLSEG_GRID_HPP
