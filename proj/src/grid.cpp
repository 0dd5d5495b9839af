#include "blseg/grid.hpp"

#include <cmath>
#include <string>

namespace blseg {

std::int64_t element_count(const Shape& shape) {
    std::int64_t n = 1;
    for (int extent : shape) n *= extent;
    return n;
}

double voxel_volume(const Spacing& spacing) {
    double v = 1.0;
    for (double s : spacing) v *= s;
    return v;
}

void check_geometry(const Shape& shape, const Spacing& spacing) {
    if (shape.size() != 2 && shape.size() != 3)
        throw ShapeError("grid must be 2-D or 3-D, got ndim=" + std::to_string(shape.size()));
    if (spacing.size() != shape.size())
        throw ShapeError("spacing rank does not match shape rank");
    for (int extent : shape)
        if (extent <= 0) throw ShapeError("all extents must be positive");
    for (double s : spacing)
        if (!(s > 0.0) || !std::isfinite(s))
            throw ShapeError("all spacings must be strictly positive and finite");
}

ScalarGrid::ScalarGrid(Shape s, Spacing sp, double fill)
    : shape(std::move(s)), spacing(std::move(sp)) {
    check_geometry(shape, spacing);
    values.assign(static_cast<std::size_t>(element_count(shape)), fill);
}

void ScalarGrid::validate() const {
    check_geometry(shape, spacing);
    if (static_cast<std::int64_t>(values.size()) != element_count(shape))
        throw ShapeError("value count does not match shape");
    for (double v : values)
        if (!std::isfinite(v)) throw ShapeError("non-finite value in ScalarGrid");
}

BinaryMask::BinaryMask(Shape s, Spacing sp, std::uint8_t fill)
    : shape(std::move(s)), spacing(std::move(sp)) {
    check_geometry(shape, spacing);
    if (fill > 1) throw ShapeError("mask fill must be 0 or 1");
    values.assign(static_cast<std::size_t>(element_count(shape)), fill);
}

std::int64_t BinaryMask::count() const {
    std::int64_t c = 0;
    for (std::uint8_t v : values) c += v;
    return c;
}

void BinaryMask::validate() const {
    check_geometry(shape, spacing);
    if (static_cast<std::int64_t>(values.size()) != element_count(shape))
        throw ShapeError("value count does not match shape");
    for (std::uint8_t v : values)
        if (v > 1) throw ShapeError("mask value outside {0,1}");
}

ProbMap::ProbMap(Shape s, Spacing sp, double fill)
    : shape(std::move(s)), spacing(std::move(sp)) {
    check_geometry(shape, spacing);
    values.assign(static_cast<std::size_t>(element_count(shape)), fill);
}

void ProbMap::validate() const {
    check_geometry(shape, spacing);
    if (static_cast<std::int64_t>(values.size()) != element_count(shape))
        throw ShapeError("value count does not match shape");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0)) throw ShapeError("probability outside [0,1]");
}

BinaryMask threshold(const ProbMap& p, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidThreshold("threshold must lie strictly inside (0,1), got " + std::to_string(delta));
    BinaryMask out(p.shape, p.spacing);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        out.values[i] = p.values[i] >= delta ? 1 : 0;
    return out;
}

} // namespace blseg
