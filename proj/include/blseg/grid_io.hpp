#ifndef BLSEG_GRID_IO_HPP
#define BLSEG_GRID_IO_HPP

#include <string>

#include "blseg/grid.hpp"

namespace blseg {

// Portable grid file. ASCII header line
//   SGRID v1 <ndim> <shape...> <spacing...> <dtype in {f32,f64,u8}>\n
// followed by a raw little-endian payload in row-major order. f64 payloads
// round-trip bit-exactly; spacings are printed with enough digits to
// round-trip doubles.
enum class GridDType { f32, f64, u8 };

struct LoadedGrid {
    GridDType dtype;
    Shape shape;
    Spacing spacing;
    std::vector<double> values;

    ScalarGrid as_scalar() const;
    // Requires every value to be exactly 0 or 1.
    BinaryMask as_mask() const;
};

void write_grid(const ScalarGrid& grid, const std::string& path, GridDType dtype = GridDType::f64);
void write_grid(const BinaryMask& mask, const std::string& path);

LoadedGrid read_grid(const std::string& path);

} // namespace blseg

#endif // BLSEG_GRID_IO_HPP
