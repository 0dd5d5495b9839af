#include "blseg/levelset.hpp"

#include <algorithm>
#include <cmath>

#include "blseg/edt.hpp"

namespace blseg {
namespace {

BinaryMask complement(const BinaryMask& g) {
    BinaryMask c(g.shape, g.spacing);
    for (std::size_t i = 0; i < g.values.size(); ++i) c.values[i] = g.values[i] ? 0 : 1;
    return c;
}

// Signed map of a single (2-D or full) mask; degenerate -> zeros.
ScalarGrid signed_whole(const BinaryMask& g) {
    ScalarGrid phi(g.shape, g.spacing);
    const std::int64_t n_fg = g.count();
    if (n_fg == 0 || n_fg == g.size()) return phi;  // zero map

    const ScalarGrid to_fg = edt(g);
    const ScalarGrid to_bg = edt(complement(g));
    for (std::size_t i = 0; i < phi.values.size(); ++i)
        phi.values[i] = g.values[i] ? -to_bg.values[i] : to_fg.values[i];
    return phi;
}

} // namespace

ScalarGrid signed_distance(const BinaryMask& g, DistanceMode mode) {
    g.validate();
    if (g.ndim() == 2 || mode == DistanceMode::full_3d) return signed_whole(g);

    // per-slice on a 3-D mask
    const int nz = g.shape[0], ny = g.shape[1], nx = g.shape[2];
    ScalarGrid phi(g.shape, g.spacing);
    BinaryMask slice({ny, nx}, {g.spacing[1], g.spacing[2]});
    for (int z = 0; z < nz; ++z) {
        const std::int64_t base = static_cast<std::int64_t>(z) * ny * nx;
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(ny) * nx; ++i)
            slice.values[static_cast<std::size_t>(i)] = g.values[static_cast<std::size_t>(base + i)];
        const ScalarGrid sp = signed_whole(slice);
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(ny) * nx; ++i)
            phi.values[static_cast<std::size_t>(base + i)] = sp.values[static_cast<std::size_t>(i)];
    }
    return phi;
}

std::vector<std::int64_t> boundary(const BinaryMask& g) {
    g.validate();
    std::vector<std::int64_t> out;
    if (g.ndim() == 2) {
        const int ny = g.shape[0], nx = g.shape[1];
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                const std::int64_t i = g.index(y, x);
                if (!g.values[static_cast<std::size_t>(i)]) continue;
                const bool bg = (y > 0 && !g.values[static_cast<std::size_t>(g.index(y - 1, x))]) ||
                                (y + 1 < ny && !g.values[static_cast<std::size_t>(g.index(y + 1, x))]) ||
                                (x > 0 && !g.values[static_cast<std::size_t>(g.index(y, x - 1))]) ||
                                (x + 1 < nx && !g.values[static_cast<std::size_t>(g.index(y, x + 1))]);
                if (bg) out.push_back(i);
            }
        return out;
    }
    const int nz = g.shape[0], ny = g.shape[1], nx = g.shape[2];
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                const std::int64_t i = g.index(z, y, x);
                if (!g.values[static_cast<std::size_t>(i)]) continue;
                const bool bg = (z > 0 && !g.values[static_cast<std::size_t>(g.index(z - 1, y, x))]) ||
                                (z + 1 < nz && !g.values[static_cast<std::size_t>(g.index(z + 1, y, x))]) ||
                                (y > 0 && !g.values[static_cast<std::size_t>(g.index(z, y - 1, x))]) ||
                                (y + 1 < ny && !g.values[static_cast<std::size_t>(g.index(z, y + 1, x))]) ||
                                (x > 0 && !g.values[static_cast<std::size_t>(g.index(z, y, x - 1))]) ||
                                (x + 1 < nx && !g.values[static_cast<std::size_t>(g.index(z, y, x + 1))]);
                if (bg) out.push_back(i);
            }
    return out;
}

namespace {

// Bilinear sample of a 2-D field given in index coordinates, clamped at
// the domain border.
double bilinear(const std::vector<double>& a, int ny, int nx, double y, double x) {
    y = std::clamp(y, 0.0, static_cast<double>(ny - 1));
    x = std::clamp(x, 0.0, static_cast<double>(nx - 1));
    const int y0 = static_cast<int>(y), x0 = static_cast<int>(x);
    const int y1 = std::min(y0 + 1, ny - 1), x1 = std::min(x0 + 1, nx - 1);
    const double fy = y - y0, fx = x - x0;
    const double a00 = a[static_cast<std::size_t>(y0) * nx + x0];
    const double a01 = a[static_cast<std::size_t>(y0) * nx + x1];
    const double a10 = a[static_cast<std::size_t>(y1) * nx + x0];
    const double a11 = a[static_cast<std::size_t>(y1) * nx + x1];
    return a00 * (1 - fy) * (1 - fx) + a01 * (1 - fy) * fx + a10 * fy * (1 - fx) + a11 * fy * fx;
}

struct NormalField {
    std::vector<double> gy, gx;  // physical-space gradient components
    int ny, nx;
};

// Central differences of phi in physical coordinates, box-averaged over a
// 3x3 window to tame staircase noise at the interface.
NormalField phi_normals(const ScalarGrid& phi) {
    const int ny = phi.shape[0], nx = phi.shape[1];
    const double hy = phi.spacing[0], hx = phi.spacing[1];
    NormalField f;
    f.ny = ny;
    f.nx = nx;
    std::vector<double> gy(static_cast<std::size_t>(ny) * nx), gx(gy.size());
    auto at = [&](int y, int x) { return phi.values[static_cast<std::size_t>(y) * nx + x]; };
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            const int ym = std::max(y - 1, 0), yp = std::min(y + 1, ny - 1);
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, nx - 1);
            gy[static_cast<std::size_t>(y) * nx + x] = (at(yp, x) - at(ym, x)) / ((yp - ym) * hy);
            gx[static_cast<std::size_t>(y) * nx + x] = (at(y, xp) - at(y, xm)) / ((xp - xm) * hx);
        }
    f.gy.assign(gy.size(), 0.0);
    f.gx.assign(gx.size(), 0.0);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            double sy = 0, sx = 0;
            int cnt = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= ny || xx < 0 || xx >= nx) continue;
                    sy += gy[static_cast<std::size_t>(yy) * nx + xx];
                    sx += gx[static_cast<std::size_t>(yy) * nx + xx];
                    ++cnt;
                }
            f.gy[static_cast<std::size_t>(y) * nx + x] = sy / cnt;
            f.gx[static_cast<std::size_t>(y) * nx + x] = sx / cnt;
        }
    return f;
}

} // namespace

double boundary_change_differential(const BinaryMask& G, const BinaryMask& S, int n_rays,
                                    RayStats* stats) {
    G.validate();
    S.validate();
    if (G.ndim() != 2) throw ShapeError("boundary_change_differential supports 2-D masks");
    if (!same_geometry(G, S)) throw ShapeError("mask geometries differ");
    if (G.empty_mask() || S.empty_mask())
        throw EmptyFeatureSet("boundary_change_differential needs nonempty masks");
    if (G.values == S.values) {
        if (stats) *stats = RayStats{};
        return 0.0;  // identical boundaries, zero displacement
    }

    const int ny = G.shape[0], nx = G.shape[1];
    const double hy = G.spacing[0], hx = G.spacing[1];
    const double h_min = std::min(hy, hx);
    const double march = 0.25 * h_min;  // physical step along the ray

    const ScalarGrid phi = signed_distance(G, DistanceMode::full_3d);
    const NormalField nf = phi_normals(phi);

    std::vector<double> chi_g(G.values.begin(), G.values.end());
    std::vector<double> chi_s(S.values.begin(), S.values.end());

    std::vector<std::int64_t> bnd = boundary(G);
    if (bnd.empty()) throw EmptyFeatureSet("G has no boundary pixels (full mask)");
    int stride = 1;
    if (n_rays > 0 && static_cast<int>(bnd.size()) > n_rays)
        stride = static_cast<int>((bnd.size() + static_cast<std::size_t>(n_rays) - 1) / static_cast<std::size_t>(n_rays));

    // Physical <-> index coordinate helpers (positions are pixel centers).
    auto sample = [&](const std::vector<double>& field, double py, double px) {
        return bilinear(field, ny, nx, py / hy, px / hx);
    };
    auto inside_domain = [&](double py, double px) {
        return py >= 0.0 && px >= 0.0 && py <= (ny - 1) * hy && px <= (nx - 1) * hx;
    };

    const double max_t = std::hypot(ny * hy, nx * hx);

    double total_len = 0.0, used_len = 0.0, acc = 0.0;
    int attempted = 0, failed = 0;

    for (std::size_t bi = 0; bi < bnd.size(); bi += static_cast<std::size_t>(stride)) {
        ++attempted;
        const std::int64_t idx = bnd[bi];
        const int y = static_cast<int>(idx / nx), x = static_cast<int>(idx % nx);
        double py = y * hy, px = x * hx;

        double nyv = nf.gy[static_cast<std::size_t>(idx)], nxv = nf.gx[static_cast<std::size_t>(idx)];
        double oy = py, ox = px;
        bool ok = false;
        // A couple of fixed-point passes: project onto the interface along
        // the normal, then re-read the smoothed gradient at the sub-pixel
        // origin for a cleaner direction.
        for (int pass = 0; pass < 3; ++pass) {
            const double norm = std::hypot(nyv, nxv);
            if (norm < 1e-12) break;
            nyv /= norm;
            nxv /= norm;
            double t = 0.0, prev = sample(chi_g, py, px), t_cross = -1.0;
            while (t < 4.0 * h_min) {
                const double t2 = t + march;
                const double cur = sample(chi_g, py + nyv * t2, px + nxv * t2);
                if (prev >= 0.5 && cur < 0.5) {
                    t_cross = t + march * (prev - 0.5) / (prev - cur);
                    break;
                }
                prev = cur;
                t = t2;
            }
            if (t_cross < 0.0) break;
            oy = py + nyv * t_cross;
            ox = px + nxv * t_cross;
            ok = true;
            const double gy2 = sample(nf.gy, oy, ox), gx2 = sample(nf.gx, oy, ox);
            if (std::hypot(gy2, gx2) < 1e-12) break;
            nyv = gy2;
            nxv = gx2;
        }
        const double norm = std::hypot(nyv, nxv);
        if (!ok || norm < 1e-12) {
            ++failed;
            continue;
        }
        nyv /= norm;
        nxv /= norm;

        // Length element: boundary pixels per unit interface length depend
        // on the interface orientation; this inverts that density.
        const double dl = 1.0 / std::max(std::abs(nyv) / hx, std::abs(nxv) / hy);
        total_len += dl;

        const double s0 = sample(chi_s, oy, ox);
        const double dir = s0 >= 0.5 ? 1.0 : -1.0;  // outward if inside S, inward otherwise
        double t = 0.0, prev = s0, d = -1.0;
        while (t < max_t) {
            const double t2 = t + march;
            const double qy = oy + dir * nyv * t2, qx = ox + dir * nxv * t2;
            if (!inside_domain(qy, qx)) break;
            const double cur = sample(chi_s, qy, qx);
            if ((prev >= 0.5 && cur < 0.5) || (prev < 0.5 && cur >= 0.5)) {
                d = t + march * std::abs(prev - 0.5) / std::abs(prev - cur);
                break;
            }
            prev = cur;
            t = t2;
        }
        if (d < 0.0) {
            ++failed;
            continue;
        }
        acc += d * d * dl;
        used_len += dl;
    }

    if (stats) {
        stats->attempted = attempted;
        stats->failed = failed;
    }
    if (failed > 0 && static_cast<double>(failed) > 0.01 * attempted)
        throw NoIntersection("boundary_change_differential: " + std::to_string(failed) + "/" +
                             std::to_string(attempted) + " rays found no crossing");
    if (used_len == 0.0)
        throw NoIntersection("boundary_change_differential: no usable rays");

    // Rescale so the skipped/subsampled samples still represent the full
    // interface length.
    double full_len = 0.0;
    if (stride > 1) {
        for (std::size_t bi = 0; bi < bnd.size(); ++bi) {
            const std::int64_t idx = bnd[bi];
            const double gyv = nf.gy[static_cast<std::size_t>(idx)], gxv = nf.gx[static_cast<std::size_t>(idx)];
            const double norm = std::hypot(gyv, gxv);
            if (norm < 1e-12) continue;
            full_len += 1.0 / std::max(std::abs(gyv / norm) / hx, std::abs(gxv / norm) / hy);
        }
    } else {
        full_len = total_len;
    }
    return acc * (full_len / used_len);
}

double boundary_change_integral(const BinaryMask& G, const BinaryMask& S) {
    G.validate();
    S.validate();
    if (!same_geometry(G, S)) throw ShapeError("mask geometries differ");
    const ScalarGrid phi = signed_distance(G, DistanceMode::full_3d);
    const double vol = voxel_volume(G.spacing);
    double acc = 0.0;
    for (std::size_t i = 0; i < G.values.size(); ++i)
        if (G.values[i] != S.values[i]) acc += std::abs(phi.values[i]);
    return 2.0 * acc * vol;
}

} // namespace blseg
