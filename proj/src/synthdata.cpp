#include "blseg/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blseg/grid_io.hpp"
#include "blseg/rng.hpp"

namespace fs = std::filesystem;

namespace blseg {

void SynthConfig::validate() const {
    check_geometry(shape, spacing);
    if (shape.size() != 2 && shape.size() != 3) throw ConfigError("shape must be 2-D or 3-D");
    if (n_lesions_min < 0 || n_lesions_max < n_lesions_min) throw ConfigError("bad lesion count range");
    if (lesion_radius_min < 1.0 || lesion_radius_max < lesion_radius_min)
        throw ConfigError("lesion radii must be >= 1 px and ordered");
    if (!(target_foreground_fraction > 0.0 && target_foreground_fraction <= 0.05))
        throw ConfigError("target foreground fraction must lie in (0, 0.05]");
    if (contrast <= 0.0) throw ConfigError("contrast must be positive");
    if (noise_std < 0.0) throw ConfigError("noise_std must be >= 0");
    if (empty_fraction < 0.0 || empty_fraction >= 1.0) throw ConfigError("empty_fraction in [0,1)");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train_fraction in (0,1)");
    // lesions must be able to fit with a margin inside the smallest axis
    int min_extent = shape[0];
    for (int e : shape) min_extent = std::min(min_extent, e);
    if (2.0 * lesion_radius_max + 2.0 > min_extent)
        throw ConfigError("lesions cannot fit inside the grid");
}

namespace {

// Smooth background: value noise on a coarse lattice, bilinearly upsampled.
void add_value_noise_2d(std::vector<double>& img, int ny, int nx, double amp, Rng& rng) {
    const int cy = std::max(2, ny / 8 + 1), cx = std::max(2, nx / 8 + 1);
    std::vector<double> coarse(static_cast<std::size_t>(cy) * cx);
    for (double& v : coarse) v = rng.normal();
    const double sy = static_cast<double>(cy - 1) / std::max(1, ny - 1);
    const double sx = static_cast<double>(cx - 1) / std::max(1, nx - 1);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            const double fy = y * sy, fx = x * sx;
            const int y0 = std::min(static_cast<int>(fy), cy - 2);
            const int x0 = std::min(static_cast<int>(fx), cx - 2);
            const double ay = fy - y0, ax = fx - x0;
            const double v = coarse[static_cast<std::size_t>(y0) * cx + x0] * (1 - ay) * (1 - ax) +
                             coarse[static_cast<std::size_t>(y0) * cx + x0 + 1] * (1 - ay) * ax +
                             coarse[static_cast<std::size_t>(y0 + 1) * cx + x0] * ay * (1 - ax) +
                             coarse[static_cast<std::size_t>(y0 + 1) * cx + x0 + 1] * ay * ax;
            img[static_cast<std::size_t>(y) * nx + x] += amp * v;
        }
}

struct Lesion {
    std::vector<double> center;  // px, per axis
    double radius;               // px
};

} // namespace

Sample generate_sample(const SynthConfig& cfg, std::uint64_t index) {
    cfg.validate();
    Rng rng = Rng::derive(cfg.seed, index);

    const bool want_empty = rng.uniform() < cfg.empty_fraction;
    const int nd = static_cast<int>(cfg.shape.size());
    const std::int64_t n = element_count(cfg.shape);

    Sample s;
    s.image = ScalarGrid(cfg.shape, cfg.spacing);
    s.mask = BinaryMask(cfg.shape, cfg.spacing);
    s.empty = want_empty;

    // background field
    if (nd == 2) {
        add_value_noise_2d(s.image.values, cfg.shape[0], cfg.shape[1], cfg.background_amplitude, rng);
    } else {
        std::vector<double> plane(static_cast<std::size_t>(cfg.shape[1]) * cfg.shape[2]);
        for (int z = 0; z < cfg.shape[0]; ++z) {
            std::fill(plane.begin(), plane.end(), 0.0);
            add_value_noise_2d(plane, cfg.shape[1], cfg.shape[2], cfg.background_amplitude, rng);
            std::copy(plane.begin(), plane.end(),
                      s.image.values.begin() + static_cast<std::ptrdiff_t>(z) * static_cast<std::ptrdiff_t>(plane.size()));
        }
    }

    if (!want_empty) {
        const double lo = 0.5 * cfg.target_foreground_fraction;
        const double hi = 2.0 * cfg.target_foreground_fraction;
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            std::vector<Lesion> lesions;
            const int k = static_cast<int>(rng.uniform_int(cfg.n_lesions_min, cfg.n_lesions_max));
            for (int i = 0; i < k; ++i) {
                Lesion L;
                L.radius = rng.uniform(cfg.lesion_radius_min, cfg.lesion_radius_max);
                const double margin = L.radius + 1.0;
                L.center.resize(static_cast<std::size_t>(nd));
                for (int a = 0; a < nd; ++a)
                    L.center[static_cast<std::size_t>(a)] =
                        rng.uniform(margin, cfg.shape[static_cast<std::size_t>(a)] - 1 - margin);
                lesions.push_back(std::move(L));
            }
            // rasterize the candidate mask
            std::fill(s.mask.values.begin(), s.mask.values.end(), 0);
            std::int64_t fg = 0;
            for (std::int64_t i = 0; i < n; ++i) {
                std::int64_t rem = i;
                int coord[3] = {0, 0, 0};
                for (int a = nd - 1; a >= 0; --a) {
                    coord[a] = static_cast<int>(rem % cfg.shape[static_cast<std::size_t>(a)]);
                    rem /= cfg.shape[static_cast<std::size_t>(a)];
                }
                for (const Lesion& L : lesions) {
                    double d2 = 0.0;
                    for (int a = 0; a < nd; ++a) {
                        const double d = coord[a] - L.center[static_cast<std::size_t>(a)];
                        d2 += d * d;
                    }
                    if (d2 <= L.radius * L.radius) {
                        s.mask.values[static_cast<std::size_t>(i)] = 1;
                        ++fg;
                        break;
                    }
                }
            }
            const double frac = static_cast<double>(fg) / static_cast<double>(n);
            if (frac >= lo && frac <= hi) {
                placed = true;
                // additive soft intensity profile per lesion
                for (std::int64_t i = 0; i < n; ++i) {
                    std::int64_t rem = i;
                    int coord[3] = {0, 0, 0};
                    for (int a = nd - 1; a >= 0; --a) {
                        coord[a] = static_cast<int>(rem % cfg.shape[static_cast<std::size_t>(a)]);
                        rem /= cfg.shape[static_cast<std::size_t>(a)];
                    }
                    double add = 0.0;
                    for (const Lesion& L : lesions) {
                        double d2 = 0.0;
                        for (int a = 0; a < nd; ++a) {
                            const double d = coord[a] - L.center[static_cast<std::size_t>(a)];
                            d2 += d * d;
                        }
                        const double sig = L.radius / 1.5;
                        add += cfg.contrast * std::exp(-d2 / (2.0 * sig * sig));
                    }
                    s.image.values[static_cast<std::size_t>(i)] += add;
                }
            }
        }
        if (!placed)
            throw ConfigError("could not realize the target foreground fraction; "
                              "lesion count/radius ranges do not fit the target");
    }

    for (double& v : s.image.values) v += rng.normal(0.0, cfg.noise_std);

    // normalize to [0,1]
    double lo = s.image.values[0], hi = s.image.values[0];
    for (double v : s.image.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    for (double& v : s.image.values) v = span > 0.0 ? (v - lo) / span : 0.0;
    return s;
}

Dataset generate(const SynthConfig& cfg, int n_samples) {
    cfg.validate();
    if (n_samples <= 1) throw ConfigError("need at least 2 samples for a split");
    Dataset ds;
    ds.config = cfg;
    const int n_train = static_cast<int>(std::ceil(cfg.train_fraction * n_samples));
    for (int i = 0; i < n_samples; ++i) {
        Sample s = generate_sample(cfg, static_cast<std::uint64_t>(i));
        if (i < n_train)
            ds.train.push_back(std::move(s));
        else
            ds.val.push_back(std::move(s));
    }
    return ds;
}

void write_dataset(const Dataset& ds, const std::string& dir) {
    fs::create_directories(dir);
    std::ofstream manifest(fs::path(dir) / "manifest.csv");
    if (!manifest) throw FormatError("cannot write manifest in '" + dir + "'");
    manifest << "case_id,split,image,mask,empty\n";
    int id = 0;
    auto dump = [&](const std::vector<Sample>& split, const char* name) {
        for (const Sample& s : split) {
            std::ostringstream img, msk;
            img << "case" << id << "_img.sgrid";
            msk << "case" << id << "_mask.sgrid";
            write_grid(s.image, (fs::path(dir) / img.str()).string());
            write_grid(s.mask, (fs::path(dir) / msk.str()).string());
            manifest << id << ',' << name << ',' << img.str() << ',' << msk.str() << ','
                     << (s.empty ? 1 : 0) << '\n';
            ++id;
        }
    };
    dump(ds.train, "train");
    dump(ds.val, "val");
}

Dataset read_dataset(const std::string& dir) {
    std::ifstream manifest(fs::path(dir) / "manifest.csv");
    if (!manifest) throw FormatError("missing manifest in '" + dir + "'");
    std::string line;
    if (!std::getline(manifest, line)) throw FormatError("empty manifest");
    Dataset ds;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string id, split, img, msk, empty;
        std::getline(ls, id, ',');
        std::getline(ls, split, ',');
        std::getline(ls, img, ',');
        std::getline(ls, msk, ',');
        std::getline(ls, empty, ',');
        Sample s;
        s.image = read_grid((fs::path(dir) / img).string()).as_scalar();
        s.mask = read_grid((fs::path(dir) / msk).string()).as_mask();
        s.empty = empty == "1";
        if (split == "train")
            ds.train.push_back(std::move(s));
        else if (split == "val")
            ds.val.push_back(std::move(s));
        else
            throw FormatError("unknown split '" + split + "'");
    }
    return ds;
}

} // namespace blseg
