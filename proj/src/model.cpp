#include "blseg/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "blseg/rng.hpp"

namespace blseg {
namespace {

ConvLayer make_conv(int in_ch, int out_ch, int k, Rng& rng) {
    ConvLayer c;
    c.in_ch = in_ch;
    c.out_ch = out_ch;
    c.k = k;
    c.w.resize(static_cast<std::size_t>(out_ch) * in_ch * k * k);
    c.b.assign(static_cast<std::size_t>(out_ch), 0.0);
    // He-uniform fan-in scaling
    const double limit = std::sqrt(6.0 / (static_cast<double>(in_ch) * k * k));
    for (double& wv : c.w) wv = rng.uniform(-limit, limit);
    return c;
}

// out[oc] += w[oc][ic] (*) in[ic], zero padding, written as shifted-plane
// accumulation so the inner loops stay contiguous.
void conv_forward(const double* in, int C, int H, int W, const ConvLayer& c, double* out) {
    const int K = c.k, R = K / 2;
    for (int oc = 0; oc < c.out_ch; ++oc) {
        double* o = out + static_cast<std::size_t>(oc) * H * W;
        const double bias = c.b[static_cast<std::size_t>(oc)];
        for (int i = 0; i < H * W; ++i) o[i] = bias;
        for (int ic = 0; ic < C; ++ic) {
            const double* src = in + static_cast<std::size_t>(ic) * H * W;
            const double* wbase = c.w.data() + ((static_cast<std::size_t>(oc) * C + ic) * K * K);
            for (int ky = 0; ky < K; ++ky) {
                const int dy = ky - R;
                const int y0 = dy < 0 ? -dy : 0;
                const int y1 = dy > 0 ? H - dy : H;
                for (int kx = 0; kx < K; ++kx) {
                    const int dx = kx - R;
                    const int x0 = dx < 0 ? -dx : 0;
                    const int x1 = dx > 0 ? W - dx : W;
                    const double wv = wbase[ky * K + kx];
                    if (wv == 0.0) continue;
                    for (int y = y0; y < y1; ++y) {
                        double* orow = o + static_cast<std::size_t>(y) * W;
                        const double* irow = src + static_cast<std::size_t>(y + dy) * W + dx;
                        for (int x = x0; x < x1; ++x) orow[x] += wv * irow[x];
                    }
                }
            }
        }
    }
}

// Accumulates input and weight gradients for one conv.
void conv_backward(const double* in, int C, int H, int W, const ConvLayer& c,
                   const double* dout, double* din, double* dw, double* db) {
    const int K = c.k, R = K / 2;
    for (int oc = 0; oc < c.out_ch; ++oc) {
        const double* dor = dout + static_cast<std::size_t>(oc) * H * W;
        double acc_b = 0.0;
        for (int i = 0; i < H * W; ++i) acc_b += dor[i];
        db[oc] += acc_b;
        for (int ic = 0; ic < C; ++ic) {
            const double* src = in + static_cast<std::size_t>(ic) * H * W;
            double* dsrc = din ? din + static_cast<std::size_t>(ic) * H * W : nullptr;
            const std::size_t wofs = (static_cast<std::size_t>(oc) * C + ic) * K * K;
            for (int ky = 0; ky < K; ++ky) {
                const int dy = ky - R;
                const int y0 = dy < 0 ? -dy : 0;
                const int y1 = dy > 0 ? H - dy : H;
                for (int kx = 0; kx < K; ++kx) {
                    const int dx = kx - R;
                    const int x0 = dx < 0 ? -dx : 0;
                    const int x1 = dx > 0 ? W - dx : W;
                    const double wv = c.w[wofs + static_cast<std::size_t>(ky * K + kx)];
                    double acc_w = 0.0;
                    for (int y = y0; y < y1; ++y) {
                        const double* drow = dor + static_cast<std::size_t>(y) * W;
                        const double* irow = src + static_cast<std::size_t>(y + dy) * W + dx;
                        if (dsrc) {
                            double* dirow = dsrc + static_cast<std::size_t>(y + dy) * W + dx;
                            for (int x = x0; x < x1; ++x) {
                                acc_w += drow[x] * irow[x];
                                dirow[x] += wv * drow[x];
                            }
                        } else {
                            for (int x = x0; x < x1; ++x) acc_w += drow[x] * irow[x];
                        }
                    }
                    dw[wofs + static_cast<std::size_t>(ky * K + kx)] += acc_w;
                }
            }
        }
    }
}

void relu_inplace(std::vector<double>& a) {
    for (double& v : a)
        if (v < 0.0) v = 0.0;
}

} // namespace

TinySegNet TinySegNet::create(int in_channels, std::uint64_t seed) {
    Rng rng(seed);
    TinySegNet n;
    n.in_channels = in_channels;
    n.c1 = make_conv(in_channels, 8, 3, rng);
    n.c2 = make_conv(8, 8, 3, rng);
    n.c3 = make_conv(8, 16, 3, rng);
    n.c4 = make_conv(24, 8, 3, rng);
    n.c5 = make_conv(8, 2, 1, rng);
    return n;
}

std::size_t TinySegNet::param_count() const {
    std::size_t n = 0;
    for (const ConvLayer* c : {&c1, &c2, &c3, &c4, &c5}) n += c->w.size() + c->b.size();
    return n;
}

std::vector<double> TinySegNet::flatten_params() const {
    std::vector<double> out;
    out.reserve(param_count());
    for (const ConvLayer* c : {&c1, &c2, &c3, &c4, &c5}) {
        out.insert(out.end(), c->w.begin(), c->w.end());
        out.insert(out.end(), c->b.begin(), c->b.end());
    }
    return out;
}

void TinySegNet::load_params(const std::vector<double>& flat) {
    if (flat.size() != param_count()) throw ShapeError("parameter count mismatch");
    std::size_t ofs = 0;
    for (ConvLayer* c : {&c1, &c2, &c3, &c4, &c5}) {
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(ofs),
                  flat.begin() + static_cast<std::ptrdiff_t>(ofs + c->w.size()), c->w.begin());
        ofs += c->w.size();
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(ofs),
                  flat.begin() + static_cast<std::ptrdiff_t>(ofs + c->b.size()), c->b.begin());
        ofs += c->b.size();
    }
}

ForwardResult Model::forward(const std::vector<ModelInput>& batch, const Spacing& spacing) const {
    ForwardResult fr;
    fr.revision = revision_;
    fr.prob.reserve(batch.size());
    fr.cache.reserve(batch.size());

    for (const ModelInput& item : batch) {
        if (item.channels != net_.in_channels)
            throw ShapeError("input channels do not match the network");
        if (item.height % 2 != 0 || item.width % 2 != 0)
            throw ShapeError("spatial dims must be divisible by 2");
        const int H = item.height, W = item.width;
        const int Hh = H / 2, Wh = W / 2;

        SampleCache sc;
        sc.h = H;
        sc.w = W;
        sc.input = item.data;

        sc.a1.resize(static_cast<std::size_t>(8) * H * W);
        conv_forward(sc.input.data(), net_.in_channels, H, W, net_.c1, sc.a1.data());
        relu_inplace(sc.a1);

        sc.a2.resize(static_cast<std::size_t>(8) * H * W);
        conv_forward(sc.a1.data(), 8, H, W, net_.c2, sc.a2.data());
        relu_inplace(sc.a2);

        // 2x2 max pool; ties resolved to the first element in scan order.
        sc.pooled.resize(static_cast<std::size_t>(8) * Hh * Wh);
        sc.pool_arg.resize(sc.pooled.size());
        for (int ch = 0; ch < 8; ++ch) {
            const double* src = sc.a2.data() + static_cast<std::size_t>(ch) * H * W;
            double* dst = sc.pooled.data() + static_cast<std::size_t>(ch) * Hh * Wh;
            int* arg = sc.pool_arg.data() + static_cast<std::size_t>(ch) * Hh * Wh;
            for (int y = 0; y < Hh; ++y)
                for (int x = 0; x < Wh; ++x) {
                    int best_i = (2 * y) * W + 2 * x;
                    double best = src[best_i];
                    const int cand[3] = {(2 * y) * W + 2 * x + 1, (2 * y + 1) * W + 2 * x,
                                         (2 * y + 1) * W + 2 * x + 1};
                    for (int ci : cand)
                        if (src[ci] > best) {
                            best = src[ci];
                            best_i = ci;
                        }
                    dst[y * Wh + x] = best;
                    arg[y * Wh + x] = best_i;
                }
        }

        sc.a3.resize(static_cast<std::size_t>(16) * Hh * Wh);
        conv_forward(sc.pooled.data(), 8, Hh, Wh, net_.c3, sc.a3.data());
        relu_inplace(sc.a3);

        // nearest-neighbour upsample x2
        sc.up.resize(static_cast<std::size_t>(16) * H * W);
        for (int ch = 0; ch < 16; ++ch) {
            const double* src = sc.a3.data() + static_cast<std::size_t>(ch) * Hh * Wh;
            double* dst = sc.up.data() + static_cast<std::size_t>(ch) * H * W;
            for (int y = 0; y < H; ++y)
                for (int x = 0; x < W; ++x) dst[y * W + x] = src[(y / 2) * Wh + x / 2];
        }

        // skip concatenation: [a2 (8) | up (16)] -> 24 channels
        sc.cat.resize(static_cast<std::size_t>(24) * H * W);
        std::memcpy(sc.cat.data(), sc.a2.data(), sizeof(double) * sc.a2.size());
        std::memcpy(sc.cat.data() + sc.a2.size(), sc.up.data(), sizeof(double) * sc.up.size());

        sc.a4.resize(static_cast<std::size_t>(8) * H * W);
        conv_forward(sc.cat.data(), 24, H, W, net_.c4, sc.a4.data());
        relu_inplace(sc.a4);

        sc.logits.resize(static_cast<std::size_t>(2) * H * W);
        conv_forward(sc.a4.data(), 8, H, W, net_.c5, sc.logits.data());

        sc.prob_fg.resize(static_cast<std::size_t>(H) * W);
        const double* z0 = sc.logits.data();
        const double* z1 = sc.logits.data() + static_cast<std::size_t>(H) * W;
        for (int i = 0; i < H * W; ++i) {
            const double m = std::max(z0[i], z1[i]);
            const double e0 = std::exp(z0[i] - m), e1 = std::exp(z1[i] - m);
            sc.prob_fg[static_cast<std::size_t>(i)] = e1 / (e0 + e1);
        }

        ProbMap pm({H, W}, spacing);
        pm.values = sc.prob_fg;
        fr.prob.push_back(std::move(pm));
        fr.cache.push_back(std::move(sc));
    }
    return fr;
}

std::vector<double> Model::backward(const ForwardResult& fwd,
                                    const std::vector<ScalarGrid>& grad_wrt_prob) const {
    if (fwd.revision != revision_)
        throw CacheError("forward cache is stale: parameters changed since the forward pass");
    if (fwd.cache.size() != grad_wrt_prob.size())
        throw ShapeError("gradient count does not match cached batch");

    const TinySegNet& n = net_;
    std::vector<double> dw1(n.c1.w.size(), 0.0), db1(n.c1.b.size(), 0.0);
    std::vector<double> dw2(n.c2.w.size(), 0.0), db2(n.c2.b.size(), 0.0);
    std::vector<double> dw3(n.c3.w.size(), 0.0), db3(n.c3.b.size(), 0.0);
    std::vector<double> dw4(n.c4.w.size(), 0.0), db4(n.c4.b.size(), 0.0);
    std::vector<double> dw5(n.c5.w.size(), 0.0), db5(n.c5.b.size(), 0.0);

    for (std::size_t bi = 0; bi < fwd.cache.size(); ++bi) {
        const SampleCache& sc = fwd.cache[bi];
        const int H = sc.h, W = sc.w, Hh = H / 2, Wh = W / 2;
        const std::size_t plane = static_cast<std::size_t>(H) * W;
        if (grad_wrt_prob[bi].values.size() != plane)
            throw ShapeError("gradient grid does not match sample shape");

        // softmax: ds/dz1 = s(1-s), ds/dz0 = -s(1-s)
        std::vector<double> dlogits(2 * plane);
        for (std::size_t i = 0; i < plane; ++i) {
            const double s = sc.prob_fg[i];
            const double gs = grad_wrt_prob[bi].values[i] * s * (1.0 - s);
            dlogits[i] = -gs;
            dlogits[plane + i] = gs;
        }

        std::vector<double> da4(8 * plane, 0.0);
        conv_backward(sc.a4.data(), 8, H, W, n.c5, dlogits.data(), da4.data(), dw5.data(), db5.data());
        for (std::size_t i = 0; i < da4.size(); ++i)
            if (sc.a4[i] <= 0.0) da4[i] = 0.0;

        std::vector<double> dcat(24 * plane, 0.0);
        conv_backward(sc.cat.data(), 24, H, W, n.c4, da4.data(), dcat.data(), dw4.data(), db4.data());

        // split concat gradient: first 8 channels to a2 (skip), last 16 to up
        std::vector<double> da2(8 * plane, 0.0);
        std::memcpy(da2.data(), dcat.data(), sizeof(double) * da2.size());
        const double* dup = dcat.data() + da2.size();

        // nearest-upsample backward: parent accumulates its 4 children
        std::vector<double> da3(static_cast<std::size_t>(16) * Hh * Wh, 0.0);
        for (int ch = 0; ch < 16; ++ch) {
            const double* src = dup + static_cast<std::size_t>(ch) * plane;
            double* dst = da3.data() + static_cast<std::size_t>(ch) * Hh * Wh;
            for (int y = 0; y < H; ++y)
                for (int x = 0; x < W; ++x) dst[(y / 2) * Wh + x / 2] += src[y * W + x];
        }
        for (std::size_t i = 0; i < da3.size(); ++i)
            if (sc.a3[i] <= 0.0) da3[i] = 0.0;

        std::vector<double> dpooled(static_cast<std::size_t>(8) * Hh * Wh, 0.0);
        conv_backward(sc.pooled.data(), 8, Hh, Wh, n.c3, da3.data(), dpooled.data(), dw3.data(), db3.data());

        // maxpool backward: route to the recorded argmax
        for (int ch = 0; ch < 8; ++ch) {
            const double* dsrc = dpooled.data() + static_cast<std::size_t>(ch) * Hh * Wh;
            const int* arg = sc.pool_arg.data() + static_cast<std::size_t>(ch) * Hh * Wh;
            double* dst = da2.data() + static_cast<std::size_t>(ch) * plane;
            for (int i = 0; i < Hh * Wh; ++i) dst[arg[i]] += dsrc[i];
        }
        for (std::size_t i = 0; i < da2.size(); ++i)
            if (sc.a2[i] <= 0.0) da2[i] = 0.0;

        std::vector<double> da1(8 * plane, 0.0);
        conv_backward(sc.a1.data(), 8, H, W, n.c2, da2.data(), da1.data(), dw2.data(), db2.data());
        for (std::size_t i = 0; i < da1.size(); ++i)
            if (sc.a1[i] <= 0.0) da1[i] = 0.0;

        conv_backward(sc.input.data(), n.in_channels, H, W, n.c1, da1.data(), nullptr, dw1.data(),
                      db1.data());
    }

    std::vector<double> flat;
    flat.reserve(n.param_count());
    for (const std::vector<double>* part : {&dw1, &db1, &dw2, &db2, &dw3, &db3, &dw4, &db4, &dw5, &db5})
        flat.insert(flat.end(), part->begin(), part->end());
    return flat;
}

AdamState AdamState::create(std::size_t n_params, double lr) {
    AdamState s;
    s.m.assign(n_params, 0.0);
    s.v.assign(n_params, 0.0);
    s.lr = lr;
    return s;
}

void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grads) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw ShapeError("adam_step: size mismatch");
    for (double g : grads)
        if (!std::isfinite(g)) throw NonFiniteGradient("non-finite gradient in adam_step");

    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

bool PlateauScheduler::observe(double metric, double& lr) {
    if (!has_best_ || metric > best_) {
        best_ = metric;
        has_best_ = true;
        bad_ = 0;
        return false;
    }
    ++bad_;
    if (bad_ >= patience_) {
        lr *= 0.5;
        bad_ = 0;
        return true;
    }
    return false;
}

double lr_on_plateau(const std::vector<double>& history, int patience, double lr0) {
    PlateauScheduler sched(patience);
    double lr = lr0;
    for (double v : history) sched.observe(v, lr);
    return lr;
}

namespace {

void write_blob(std::ostream& os, const std::vector<double>& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_blob(std::istream& is, std::size_t n) {
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (is.gcount() != static_cast<std::streamsize>(n * sizeof(double)))
        throw FormatError("truncated checkpoint");
    return v;
}

} // namespace

void save_checkpoint(const std::string& path, const TinySegNet& net, const AdamState& adam) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open '" + path + "' for writing");
    os << "TSNET v1 " << net.in_channels << ' ' << net.param_count() << '\n';
    write_blob(os, net.flatten_params());
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ADAM %lld %.17g\n", static_cast<long long>(adam.step), adam.lr);
    os << buf;
    write_blob(os, adam.m);
    write_blob(os, adam.v);
    if (!os) throw FormatError("checkpoint write failed");
}

void load_checkpoint(const std::string& path, TinySegNet& net, AdamState& adam) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open '" + path + "'");
    std::string header;
    if (!std::getline(is, header)) throw FormatError("missing checkpoint header");
    std::istringstream hs(header);
    std::string magic, version;
    int in_channels = 0;
    std::size_t n_params = 0;
    hs >> magic >> version >> in_channels >> n_params;
    if (magic != "TSNET" || version != "v1") throw FormatError("bad checkpoint magic");

    TinySegNet fresh = TinySegNet::create(in_channels, 0);
    if (fresh.param_count() != n_params) throw FormatError("checkpoint parameter count mismatch");
    fresh.load_params(read_blob(is, n_params));
    net = std::move(fresh);

    std::string adam_header;
    if (!std::getline(is, adam_header)) throw FormatError("missing adam header");
    std::istringstream as(adam_header);
    std::string tag;
    long long step = 0;
    double lr = 0.0;
    as >> tag >> step >> lr;
    if (tag != "ADAM") throw FormatError("bad adam header");
    adam = AdamState::create(n_params, lr);
    adam.step = step;
    adam.m = read_blob(is, n_params);
    adam.v = read_blob(is, n_params);
}

} // namespace blseg
