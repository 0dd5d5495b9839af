#include "blseg/grid_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace blseg {
namespace {

const char* dtype_name(GridDType t) {
    switch (t) {
        case GridDType::f32: return "f32";
        case GridDType::f64: return "f64";
        case GridDType::u8: return "u8";
    }
    return "?";
}

GridDType parse_dtype(const std::string& s) {
    if (s == "f32") return GridDType::f32;
    if (s == "f64") return GridDType::f64;
    if (s == "u8") return GridDType::u8;
    throw FormatError("unknown dtype '" + s + "'");
}

std::string format_spacing(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_header(std::ostream& os, const Shape& shape, const Spacing& spacing, GridDType dtype) {
    os << "SGRID v1 " << shape.size();
    for (int e : shape) os << ' ' << e;
    for (double s : spacing) os << ' ' << format_spacing(s);
    os << ' ' << dtype_name(dtype) << '\n';
}

template <typename T>
void write_payload(std::ostream& os, const std::vector<double>& values) {
    // Little-endian host assumed; the format is defined little-endian.
    std::vector<T> buf(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) buf[i] = static_cast<T>(values[i]);
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(T)));
}

template <typename T>
std::vector<double> read_payload(std::istream& is, std::int64_t count) {
    std::vector<T> buf(static_cast<std::size_t>(count));
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(T)));
    if (is.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(T)))
        throw FormatError("truncated payload");
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = static_cast<double>(buf[i]);
    return out;
}

} // namespace

ScalarGrid LoadedGrid::as_scalar() const {
    ScalarGrid g;
    g.shape = shape;
    g.spacing = spacing;
    g.values = values;
    g.validate();
    return g;
}

BinaryMask LoadedGrid::as_mask() const {
    BinaryMask m;
    m.shape = shape;
    m.spacing = spacing;
    m.values.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0 && values[i] != 1.0)
            throw FormatError("grid is not binary");
        m.values[i] = static_cast<std::uint8_t>(values[i]);
    }
    m.validate();
    return m;
}

void write_grid(const ScalarGrid& grid, const std::string& path, GridDType dtype) {
    grid.validate();
    if (dtype == GridDType::u8) throw FormatError("u8 payload is reserved for masks");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open '" + path + "' for writing");
    write_header(os, grid.shape, grid.spacing, dtype);
    if (dtype == GridDType::f64)
        write_payload<double>(os, grid.values);
    else
        write_payload<float>(os, grid.values);
    if (!os) throw FormatError("write failed for '" + path + "'");
}

void write_grid(const BinaryMask& mask, const std::string& path) {
    mask.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open '" + path + "' for writing");
    write_header(os, mask.shape, mask.spacing, GridDType::u8);
    os.write(reinterpret_cast<const char*>(mask.values.data()),
             static_cast<std::streamsize>(mask.values.size()));
    if (!os) throw FormatError("write failed for '" + path + "'");
}

LoadedGrid read_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open '" + path + "'");
    std::string header;
    if (!std::getline(is, header)) throw FormatError("missing header");

    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "SGRID" || version != "v1") throw FormatError("bad magic in '" + path + "'");

    int ndim = 0;
    if (!(hs >> ndim) || (ndim != 2 && ndim != 3)) throw FormatError("bad ndim");

    LoadedGrid g;
    g.shape.resize(static_cast<std::size_t>(ndim));
    for (int& e : g.shape)
        if (!(hs >> e) || e <= 0) throw FormatError("bad extent");
    g.spacing.resize(static_cast<std::size_t>(ndim));
    for (double& s : g.spacing)
        if (!(hs >> s) || !(s > 0.0) || !std::isfinite(s)) throw FormatError("bad spacing");

    std::string dtype_str;
    if (!(hs >> dtype_str)) throw FormatError("missing dtype");
    std::string trailing;
    if (hs >> trailing) throw FormatError("trailing tokens in header (dimension mismatch?)");
    g.dtype = parse_dtype(dtype_str);

    const std::int64_t count = element_count(g.shape);
    switch (g.dtype) {
        case GridDType::f64: g.values = read_payload<double>(is, count); break;
        case GridDType::f32: g.values = read_payload<float>(is, count); break;
        case GridDType::u8: g.values = read_payload<std::uint8_t>(is, count); break;
    }
    for (double v : g.values)
        if (!std::isfinite(v)) throw FormatError("non-finite value in payload");
    return g;
}

} // namespace blseg
