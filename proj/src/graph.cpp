#include "xmuda/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include "xmuda/errors.hpp"
#include "xmuda/numeric.hpp"

namespace xmuda {

Value Graph::push(Tensor value, bool track) {
    Node n;
    n.value = std::move(value);
    n.track = track;
    nodes_.push_back(std::move(n));
    return Value{int(nodes_.size()) - 1};
}

Value Graph::constant(Tensor t) { return push(std::move(t), false); }

Value Graph::leaf(Tensor t) { return push(std::move(t), true); }

const Tensor& Graph::grad(Value v) const {
    const Node& n = nodes_[size_t(v.id)];
    require_arg(n.track, "gradient requested for untracked value");
    return n.grad;
}

Tensor& Graph::grad_buf(Value v) {
    Node& n = nodes_[size_t(v.id)];
    if (n.grad.numel() == 0) n.grad = Tensor(n.value.shape());
    return n.grad;
}

void Graph::add_grad(Value v, const Tensor& g) {
    Tensor& dst = grad_buf(v);
    for (size_t i = 0; i < g.numel(); ++i) dst[i] += g[i];
}

void Graph::backward(Value root) {
    require_arg(val(root).numel() == 1, "backward root must be a scalar");
    for (Node& n : nodes_)
        if (n.grad.numel() != 0) n.grad.fill(0.0);
    grad_buf(root)[0] = 1.0;
    for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) (*it)();
}

Value Graph::add(Value a, Value b) {
    require_arg(val(a).same_shape(val(b)), "add: shape mismatch");
    Tensor out = val(a);
    const Tensor& bv = val(b);
    for (size_t i = 0; i < out.numel(); ++i) out[i] += bv[i];
    Value y = push(std::move(out), tracked(a) || tracked(b));
    if (nodes_[size_t(y.id)].track)
        tape_.push_back([this, a, b, y] {
            const Tensor& g = grad_buf(y);
            if (tracked(a)) add_grad(a, g);
            if (tracked(b)) add_grad(b, g);
        });
    return y;
}

Value Graph::sub(Value a, Value b) {
    require_arg(val(a).same_shape(val(b)), "sub: shape mismatch");
    Tensor out = val(a);
    const Tensor& bv = val(b);
    for (size_t i = 0; i < out.numel(); ++i) out[i] -= bv[i];
    Value y = push(std::move(out), tracked(a) || tracked(b));
    if (nodes_[size_t(y.id)].track)
        tape_.push_back([this, a, b, y] {
            const Tensor& g = grad_buf(y);
            if (tracked(a)) add_grad(a, g);
            if (tracked(b)) {
                Tensor& gb = grad_buf(b);
                for (size_t i = 0; i < g.numel(); ++i) gb[i] -= g[i];
            }
        });
    return y;
}

Value Graph::mul(Value a, Value b) {
    require_arg(val(a).same_shape(val(b)), "mul: shape mismatch");
    Tensor out = val(a);
    const Tensor& bv = val(b);
    for (size_t i = 0; i < out.numel(); ++i) out[i] *= bv[i];
    Value y = push(std::move(out), tracked(a) || tracked(b));
    if (nodes_[size_t(y.id)].track)
        tape_.push_back([this, a, b, y] {
            const Tensor& g = grad_buf(y);
            if (tracked(a)) {
                Tensor& ga = grad_buf(a);
                const Tensor& bv2 = val(b);
                for (size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * bv2[i];
            }
            if (tracked(b)) {
                Tensor& gb = grad_buf(b);
                const Tensor& av = val(a);
                for (size_t i = 0; i < g.numel(); ++i) gb[i] += g[i] * av[i];
            }
        });
    return y;
}

Value Graph::scale(Value a, double s) {
    Tensor out = val(a);
    for (size_t i = 0; i < out.numel(); ++i) out[i] *= s;
    Value y = push(std::move(out), tracked(a));
    if (tracked(a))
        tape_.push_back([this, a, y, s] {
            const Tensor& g = grad_buf(y);
            Tensor& ga = grad_buf(a);
            for (size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * s;
        });
    return y;
}

Value Graph::mul_const(Value a, const Tensor& m) {
    require_arg(val(a).same_shape(m), "mul_const: shape mismatch");
    Tensor out = val(a);
    for (size_t i = 0; i < out.numel(); ++i) out[i] *= m[i];
    Value y = push(std::move(out), tracked(a));
    if (tracked(a))
        tape_.push_back([this, a, y, m] {
            const Tensor& g = grad_buf(y);
            Tensor& ga = grad_buf(a);
            for (size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * m[i];
        });
    return y;
}

Value Graph::relu(Value a) {
    Tensor out = val(a);
    for (size_t i = 0; i < out.numel(); ++i)
        if (out[i] < 0.0) out[i] = 0.0;
    Value y = push(std::move(out), tracked(a));
    if (tracked(a))
        tape_.push_back([this, a, y] {
            const Tensor& g = grad_buf(y);
            const Tensor& x = val(a);
            Tensor& ga = grad_buf(a);
            for (size_t i = 0; i < g.numel(); ++i)
                if (x[i] > 0.0) ga[i] += g[i];
        });
    return y;
}

Value Graph::linear(Value x, Value w, Value b) {
    const Tensor& xv = val(x);
    const Tensor& wv = val(w);
    const Tensor& bv = val(b);
    require_arg(xv.ndim() == 2 && wv.ndim() == 2 && bv.ndim() == 1,
                "linear: bad ranks");
    const int n = xv.dim(0), fin = xv.dim(1), fout = wv.dim(0);
    require_arg(wv.dim(1) == fin && bv.dim(0) == fout, "linear: shape mismatch");

    Tensor out({n, fout});
    gemm_a_bt_acc(xv.data(), wv.data(), out.data(), n, fin, fout);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < fout; ++j) out.at(i, j) += bv[size_t(j)];

    Value y = push(std::move(out), tracked(x) || tracked(w) || tracked(b));
    if (nodes_[size_t(y.id)].track)
        tape_.push_back([this, x, w, b, y, n, fin, fout] {
            const Tensor& g = grad_buf(y);
            if (tracked(x))
                gemm_acc(g.data(), val(w).data(), grad_buf(x).data(), n, fout, fin);
            if (tracked(w))
                gemm_at_b_acc(g.data(), val(x).data(), grad_buf(w).data(), fout, n,
                              fin);
            if (tracked(b)) {
                Tensor& gb = grad_buf(b);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < fout; ++j) gb[size_t(j)] += g.at(i, j);
            }
        });
    return y;
}

namespace {

// Shared indexing for im2col / col2im. visit(col_row, col_col, x_index) is
// called for every in-bounds source element.
template <typename F>
void for_each_col(int cin, int h, int w, int k, int stride, int pad, int ho,
                  int wo, F&& visit) {
    for (int ci = 0; ci < cin; ++ci)
        for (int ky = 0; ky < k; ++ky)
            for (int kx = 0; kx < k; ++kx) {
                const int row = (ci * k + ky) * k + kx;
                for (int oy = 0; oy < ho; ++oy) {
                    const int iy = oy * stride + ky - pad;
                    if (iy < 0 || iy >= h) continue;
                    for (int ox = 0; ox < wo; ++ox) {
                        const int ix = ox * stride + kx - pad;
                        if (ix < 0 || ix >= w) continue;
                        visit(row, oy * wo + ox, (std::size_t(ci) * h + iy) * w + ix);
                    }
                }
            }
}

}  // namespace

Value Graph::conv2d(Value x, Value w, Value b, int stride, int pad) {
    const Tensor& xv = val(x);
    const Tensor& wv = val(w);
    const Tensor& bv = val(b);
    require_arg(xv.ndim() == 3 && wv.ndim() == 4, "conv2d: bad ranks");
    const int cin = xv.dim(0), h = xv.dim(1), wd = xv.dim(2);
    const int cout = wv.dim(0), k = wv.dim(2);
    require_arg(wv.dim(1) == cin && wv.dim(3) == k && bv.dim(0) == cout,
                "conv2d: shape mismatch");
    const int ho = (h + 2 * pad - k) / stride + 1;
    const int wo = (wd + 2 * pad - k) / stride + 1;
    require_arg(ho > 0 && wo > 0, "conv2d: empty output");

    const int crows = cin * k * k, ccols = ho * wo;
    auto cols = std::make_shared<Tensor>(Tensor({crows, ccols}));
    for_each_col(cin, h, wd, k, stride, pad, ho, wo,
                 [&](int r, int c, std::size_t xi) {
                     cols->at(r, c) = xv[xi];
                 });

    Tensor out({cout, ho, wo});
    gemm_acc(wv.data(), cols->data(), out.data(), cout, crows, ccols);
    for (int co = 0; co < cout; ++co) {
        double* o = out.data() + std::size_t(co) * ccols;
        const double bc = bv[size_t(co)];
        for (int i = 0; i < ccols; ++i) o[i] += bc;
    }

    Value y = push(std::move(out), tracked(x) || tracked(w) || tracked(b));
    if (nodes_[size_t(y.id)].track)
        tape_.push_back([this, x, w, b, y, cols, cin, h, wd, k, stride, pad, ho,
                         wo, cout, crows, ccols] {
            const Tensor& g = grad_buf(y);
            if (tracked(w))
                gemm_a_bt_acc(g.data(), cols->data(), grad_buf(w).data(), cout,
                              ccols, crows);
            if (tracked(b)) {
                Tensor& gb = grad_buf(b);
                for (int co = 0; co < cout; ++co) {
                    const double* gp = g.data() + std::size_t(co) * ccols;
                    double s = 0.0;
                    for (int i = 0; i < ccols; ++i) s += gp[i];
                    gb[size_t(co)] += s;
                }
            }
            if (tracked(x)) {
                Tensor dcols({crows, ccols});
                gemm_at_b_acc(val(w).data(), g.data(), dcols.data(), crows, cout,
                              ccols);
                Tensor& gx = grad_buf(x);
                for_each_col(cin, h, wd, k, stride, pad, ho, wo,
                             [&](int r, int c, std::size_t xi) {
                                 gx[xi] += dcols.at(r, c);
                             });
            }
        });
    return y;
}

Value Graph::upsample2(Value x) {
    const Tensor& xv = val(x);
    require_arg(xv.ndim() == 3, "upsample2: expects (C,H,W)");
    const int c = xv.dim(0), h = xv.dim(1), w = xv.dim(2);
    Tensor out({c, 2 * h, 2 * w});
    for (int ci = 0; ci < c; ++ci)
        for (int y2 = 0; y2 < 2 * h; ++y2)
            for (int x2 = 0; x2 < 2 * w; ++x2)
                out.at(ci, y2, x2) = xv.at(ci, y2 / 2, x2 / 2);
    Value y = push(std::move(out), tracked(x));
    if (tracked(x))
        tape_.push_back([this, x, y, c, h, w] {
            const Tensor& g = grad_buf(y);
            Tensor& gx = grad_buf(x);
            for (int ci = 0; ci < c; ++ci)
                for (int y2 = 0; y2 < 2 * h; ++y2)
                    for (int x2 = 0; x2 < 2 * w; ++x2)
                        gx.at(ci, y2 / 2, x2 / 2) += g.at(ci, y2, x2);
        });
    return y;
}

Value Graph::concat_ch(Value a, Value b) {
    const Tensor& av = val(a);
    const Tensor& bv = val(b);
    require_arg(av.ndim() == 3 && bv.ndim() == 3 && av.dim(1) == bv.dim(1) &&
                    av.dim(2) == bv.dim(2),
                "concat_ch: spatial mismatch");
    const int ca = av.dim(0), cb = bv.dim(0), h = av.dim(1), w = av.dim(2);
    Tensor out({ca + cb, h, w});
    std::copy(av.data(), av.data() + av.numel(), out.data());
    std::copy(bv.data(), bv.data() + bv.numel(), out.data() + av.numel());
    Value y = push(std::move(out), tracked(a) || tracked(b));
    if (nodes_[size_t(y.id)].track)
        tape_.push_back([this, a, b, y] {
            const Tensor& g = grad_buf(y);
            const size_t na = val(a).numel();
            if (tracked(a)) {
                Tensor& ga = grad_buf(a);
                for (size_t i = 0; i < na; ++i) ga[i] += g[i];
            }
            if (tracked(b)) {
                Tensor& gb = grad_buf(b);
                for (size_t i = 0; i < val(b).numel(); ++i) gb[i] += g[na + i];
            }
        });
    return y;
}

Value Graph::concat_cols(Value a, Value b) {
    const Tensor& av = val(a);
    const Tensor& bv = val(b);
    require_arg(av.ndim() == 2 && bv.ndim() == 2 && av.dim(0) == bv.dim(0),
                "concat_cols: row mismatch");
    const int n = av.dim(0), fa = av.dim(1), fb = bv.dim(1);
    Tensor out({n, fa + fb});
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < fa; ++j) out.at(i, j) = av.at(i, j);
        for (int j = 0; j < fb; ++j) out.at(i, fa + j) = bv.at(i, j);
    }
    Value y = push(std::move(out), tracked(a) || tracked(b));
    if (nodes_[size_t(y.id)].track)
        tape_.push_back([this, a, b, y, n, fa, fb] {
            const Tensor& g = grad_buf(y);
            if (tracked(a)) {
                Tensor& ga = grad_buf(a);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < fa; ++j) ga.at(i, j) += g.at(i, j);
            }
            if (tracked(b)) {
                Tensor& gb = grad_buf(b);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < fb; ++j) gb.at(i, j) += g.at(i, fa + j);
            }
        });
    return y;
}

Value Graph::gather_rows(Value x, const std::vector<int>& idx) {
    const Tensor& xv = val(x);
    require_arg(xv.ndim() == 2, "gather_rows: expects matrix");
    const int m = xv.dim(0), f = xv.dim(1);
    Tensor out({int(idx.size()), f});
    for (size_t i = 0; i < idx.size(); ++i) {
        require_arg(idx[i] >= 0 && idx[i] < m, "gather_rows: index out of range");
        for (int j = 0; j < f; ++j) out.at(int(i), j) = xv.at(idx[i], j);
    }
    Value y = push(std::move(out), tracked(x));
    if (tracked(x))
        tape_.push_back([this, x, y, idx, f] {
            const Tensor& g = grad_buf(y);
            Tensor& gx = grad_buf(x);
            for (size_t i = 0; i < idx.size(); ++i)
                for (int j = 0; j < f; ++j) gx.at(idx[i], j) += g.at(int(i), j);
        });
    return y;
}

Value Graph::group_max(Value x, int groups, int k) {
    const Tensor& xv = val(x);
    require_arg(xv.ndim() == 2 && xv.dim(0) == groups * k,
                "group_max: row count must be groups*k");
    const int f = xv.dim(1);
    Tensor out({groups, f});
    auto arg = std::make_shared<std::vector<int>>(std::size_t(groups) * f, 0);
    for (int n = 0; n < groups; ++n)
        for (int j = 0; j < f; ++j) {
            double best = xv.at(n * k, j);
            int bi = 0;
            for (int q = 1; q < k; ++q) {
                const double v = xv.at(n * k + q, j);
                if (v > best) {  // strict: ties keep the lowest index
                    best = v;
                    bi = q;
                }
            }
            out.at(n, j) = best;
            (*arg)[std::size_t(n) * f + j] = bi;
        }
    Value y = push(std::move(out), tracked(x));
    if (tracked(x))
        tape_.push_back([this, x, y, arg, groups, k, f] {
            const Tensor& g = grad_buf(y);
            Tensor& gx = grad_buf(x);
            for (int n = 0; n < groups; ++n)
                for (int j = 0; j < f; ++j)
                    gx.at(n * k + (*arg)[std::size_t(n) * f + j], j) += g.at(n, j);
        });
    return y;
}

Value Graph::softmax_rows(Value x) {
    const Tensor& xv = val(x);
    require_arg(xv.ndim() == 2, "softmax_rows: expects matrix");
    const int n = xv.dim(0), c = xv.dim(1);
    Tensor out({n, c});
    for (int i = 0; i < n; ++i) {
        double mx = xv.at(i, 0);
        for (int j = 1; j < c; ++j) mx = std::max(mx, xv.at(i, j));
        double z = 0.0;
        for (int j = 0; j < c; ++j) {
            const double e = std::exp(xv.at(i, j) - mx);
            out.at(i, j) = e;
            z += e;
        }
        for (int j = 0; j < c; ++j) out.at(i, j) /= z;
    }
    Value y = push(std::move(out), tracked(x));
    if (tracked(x))
        tape_.push_back([this, x, y, n, c] {
            const Tensor& g = grad_buf(y);
            const Tensor& p = val(y);
            Tensor& gx = grad_buf(x);
            for (int i = 0; i < n; ++i) {
                double dot = 0.0;
                for (int j = 0; j < c; ++j) dot += g.at(i, j) * p.at(i, j);
                for (int j = 0; j < c; ++j)
                    gx.at(i, j) += p.at(i, j) * (g.at(i, j) - dot);
            }
        });
    return y;
}

namespace {

// Round-to-nearest with ties toward the lower index.
inline int nearest_index(double u) { return int(std::ceil(u - 0.5)); }

inline int clampi(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

Value Graph::sample_map(Value map, const Tensor& uv, bool bilinear) {
    const Tensor& mv = val(map);
    require_arg(mv.ndim() == 3, "sample_map: expects (C,H,W)");
    require_arg(uv.ndim() == 2 && uv.dim(1) == 2, "sample_map: uv must be (N,2)");
    const int c = mv.dim(0), h = mv.dim(1), w = mv.dim(2);
    const int n = uv.dim(0);
    Tensor out({n, c});

    struct Tap {
        int idx;
        double wgt;
    };
    auto taps = std::make_shared<std::vector<std::array<Tap, 4>>>(std::size_t(n));

    for (int i = 0; i < n; ++i) {
        const double u = uv.at(i, 0), v = uv.at(i, 1);
        require_arg(u >= -0.5 && u < w - 0.5 + 1e-12 && v >= -0.5 &&
                        v < h - 0.5 + 1e-12,
                    "sample_map: coordinate out of range");
        auto& t = (*taps)[std::size_t(i)];
        if (!bilinear) {
            const int iu = clampi(nearest_index(u), 0, w - 1);
            const int iv = clampi(nearest_index(v), 0, h - 1);
            t[0] = {iv * w + iu, 1.0};
            t[1] = t[2] = t[3] = {0, 0.0};
        } else {
            const int u0 = clampi(int(std::floor(u)), 0, w - 1);
            const int v0 = clampi(int(std::floor(v)), 0, h - 1);
            const int u1 = clampi(u0 + 1, 0, w - 1);
            const int v1 = clampi(v0 + 1, 0, h - 1);
            const double fu = std::min(std::max(u - u0, 0.0), 1.0);
            const double fv = std::min(std::max(v - v0, 0.0), 1.0);
            t[0] = {v0 * w + u0, (1 - fu) * (1 - fv)};
            t[1] = {v0 * w + u1, fu * (1 - fv)};
            t[2] = {v1 * w + u0, (1 - fu) * fv};
            t[3] = {v1 * w + u1, fu * fv};
        }
        for (int ci = 0; ci < c; ++ci) {
            const double* plane = mv.data() + std::size_t(ci) * h * w;
            double acc = 0.0;
            for (const Tap& tp : t)
                if (tp.wgt != 0.0) acc += tp.wgt * plane[tp.idx];
            out.at(i, ci) = acc;
        }
    }

    Value y = push(std::move(out), tracked(map));
    if (tracked(map))
        tape_.push_back([this, map, y, taps, c, h, w, n] {
            const Tensor& g = grad_buf(y);
            Tensor& gm = grad_buf(map);
            for (int i = 0; i < n; ++i) {
                const auto& t = (*taps)[std::size_t(i)];
                for (int ci = 0; ci < c; ++ci) {
                    double* plane = gm.data() + std::size_t(ci) * h * w;
                    const double gi = g.at(i, ci);
                    for (const Tap& tp : t)
                        if (tp.wgt != 0.0) plane[tp.idx] += tp.wgt * gi;
                }
            }
        });
    return y;
}

Graph::WceResult Graph::weighted_ce(Value probs,
                                    const std::vector<int>& labels,
                                    const std::vector<double>& class_weights,
                                    int ignore_id) {
    const Tensor& pv = val(probs);
    require_arg(pv.ndim() == 2, "weighted_ce: probs must be (N,C)");
    const int n = pv.dim(0), c = pv.dim(1);
    require_arg(int(labels.size()) == n, "weighted_ce: labels length mismatch");
    require_arg(int(class_weights.size()) == c,
                "weighted_ce: class_weights length mismatch");

    int n_valid = 0;
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        const int y = labels[size_t(i)];
        if (y == ignore_id) continue;
        require_arg(y >= 0 && y < c, "weighted_ce: label out of range");
        ++n_valid;
        loss -= class_weights[size_t(y)] * std::log(pv.at(i, y));
    }
    if (n_valid > 0) loss /= n_valid;

    Value out = push(Tensor::scalar(loss), tracked(probs));
    if (tracked(probs) && n_valid > 0) {
        tape_.push_back([this, probs, out, labels, class_weights, ignore_id,
                         n_valid, n] {
            const double g = grad_buf(out)[0];
            const Tensor& pv2 = val(probs);
            Tensor& gp = grad_buf(probs);
            for (int i = 0; i < n; ++i) {
                const int y = labels[size_t(i)];
                if (y == ignore_id) continue;
                gp.at(i, y) -= g * class_weights[size_t(y)] /
                               (double(n_valid) * pv2.at(i, y));
            }
        });
    }
    return {out, n_valid};
}

Value Graph::kl_const_target(const Tensor& target_probs, Value mimic_probs) {
    const Tensor& qv = val(mimic_probs);
    require_arg(target_probs.same_shape(qv), "kl: shape mismatch");
    require_arg(qv.ndim() == 2, "kl: expects (N,C)");
    const int n = qv.dim(0), c = qv.dim(1);

    double loss = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < c; ++j) {
            const double p = target_probs.at(i, j);
            if (p > 0.0) loss += p * std::log(p / qv.at(i, j));
        }
    loss /= n;

    Value out = push(Tensor::scalar(loss), tracked(mimic_probs));
    if (tracked(mimic_probs))
        tape_.push_back([this, mimic_probs, out, target_probs, n, c] {
            const double g = grad_buf(out)[0];
            const Tensor& qv2 = val(mimic_probs);
            Tensor& gq = grad_buf(mimic_probs);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < c; ++j)
                    gq.at(i, j) -= g * target_probs.at(i, j) / (n * qv2.at(i, j));
        });
    return out;
}

Value Graph::entropy_norm(Value probs) {
    const Tensor& pv = val(probs);
    require_arg(pv.ndim() == 2, "entropy_norm: expects (N,C)");
    const int n = pv.dim(0), c = pv.dim(1);
    require_arg(c >= 2, "entropy_norm: needs at least 2 classes");
    const double norm = 1.0 / (n * std::log(double(c)));

    double loss = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < c; ++j) {
            const double p = pv.at(i, j);
            if (p > 0.0) loss -= p * std::log(p);
        }
    loss *= norm;

    Value out = push(Tensor::scalar(loss), tracked(probs));
    if (tracked(probs))
        tape_.push_back([this, probs, out, n, c, norm] {
            const double g = grad_buf(out)[0];
            const Tensor& pv2 = val(probs);
            Tensor& gp = grad_buf(probs);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < c; ++j) {
                    const double p = pv2.at(i, j);
                    if (p > 0.0) gp.at(i, j) -= g * norm * (std::log(p) + 1.0);
                }
        });
    return out;
}

namespace {

struct CoralSide {
    int b = 0, f = 0;
    std::vector<double> xc;    // centered features (b x f)
    std::vector<double> w;     // eigenvalues of cov + eps I
    std::vector<double> v;     // eigenvectors (columns)
    std::vector<double> logm;  // V log(W) V^T
};

CoralSide coral_forward(const Tensor& x, double eps) {
    CoralSide s;
    s.b = x.dim(0);
    s.f = x.dim(1);
    require_arg(s.b >= 2, "log_coral: needs at least 2 rows per batch");
    require_arg(x.all_finite(), "log_coral: non-finite features");
    const int b = s.b, f = s.f;

    s.xc.assign(std::size_t(b) * f, 0.0);
    for (int j = 0; j < f; ++j) {
        double mu = 0.0;
        for (int i = 0; i < b; ++i) mu += x.at(i, j);
        mu /= b;
        for (int i = 0; i < b; ++i) s.xc[std::size_t(i) * f + j] = x.at(i, j) - mu;
    }

    std::vector<double> cov(std::size_t(f) * f, 0.0);
    gemm_at_b_acc(s.xc.data(), s.xc.data(), cov.data(), f, b, f);
    const double inv = 1.0 / (b - 1);
    for (auto& vv : cov) vv *= inv;
    for (int j = 0; j < f; ++j) cov[std::size_t(j) * f + j] += eps;

    jacobi_eigh(cov, f, s.w, s.v);

    s.logm.assign(std::size_t(f) * f, 0.0);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) {
            double acc = 0.0;
            for (int k = 0; k < f; ++k)
                acc += s.v[std::size_t(i) * f + k] * std::log(s.w[std::size_t(k)]) *
                       s.v[std::size_t(j) * f + k];
            s.logm[std::size_t(i) * f + j] = acc;
        }
    return s;
}

// Gradient of the features given upstream gradient G on logm(cov + eps I).
// Uses the Daleckii-Krein formula for the derivative of the matrix log.
std::vector<double> coral_backward(const CoralSide& s,
                                   const std::vector<double>& gmat) {
    const int b = s.b, f = s.f;
    // M = V^T G V
    std::vector<double> tmp(std::size_t(f) * f, 0.0), m(std::size_t(f) * f, 0.0);
    gemm_at_b_acc(s.v.data(), gmat.data(), tmp.data(), f, f, f);
    gemm_acc(tmp.data(), s.v.data(), m.data(), f, f, f);
    // Scale by the Loewner matrix of log.
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) {
            const double li = s.w[std::size_t(i)], lj = s.w[std::size_t(j)];
            double kij;
            if (std::fabs(li - lj) < 1e-12 * (std::fabs(li) + std::fabs(lj)))
                kij = 2.0 / (li + lj);
            else
                kij = (std::log(li) - std::log(lj)) / (li - lj);
            m[std::size_t(i) * f + j] *= kij;
        }
    // dCov = V M V^T
    std::fill(tmp.begin(), tmp.end(), 0.0);
    std::vector<double> dcov(std::size_t(f) * f, 0.0);
    gemm_acc(s.v.data(), m.data(), tmp.data(), f, f, f);
    gemm_a_bt_acc(tmp.data(), s.v.data(), dcov.data(), f, f, f);
    // dXc = Xc (dCov + dCov^T) / (b - 1); then center the gradient.
    std::vector<double> sym(std::size_t(f) * f);
    const double inv = 1.0 / (b - 1);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j)
            sym[std::size_t(i) * f + j] =
                (dcov[std::size_t(i) * f + j] + dcov[std::size_t(j) * f + i]) * inv;
    std::vector<double> dxc(std::size_t(b) * f, 0.0);
    gemm_acc(s.xc.data(), sym.data(), dxc.data(), b, f, f);
    for (int j = 0; j < f; ++j) {
        double mu = 0.0;
        for (int i = 0; i < b; ++i) mu += dxc[std::size_t(i) * f + j];
        mu /= b;
        for (int i = 0; i < b; ++i) dxc[std::size_t(i) * f + j] -= mu;
    }
    return dxc;
}

}  // namespace

Value Graph::log_coral(Value feats_source, Value feats_target, double eps) {
    const Tensor& xs = val(feats_source);
    const Tensor& xt = val(feats_target);
    require_arg(xs.ndim() == 2 && xt.ndim() == 2 && xs.dim(1) == xt.dim(1),
                "log_coral: feature width mismatch");

    auto side_s = std::make_shared<CoralSide>(coral_forward(xs, eps));
    auto side_t = std::make_shared<CoralSide>(coral_forward(xt, eps));

    const int f = side_s->f;
    double loss = 0.0;
    for (std::size_t i = 0; i < side_s->logm.size(); ++i) {
        const double d = side_s->logm[i] - side_t->logm[i];
        loss += d * d;
    }

    Value out =
        push(Tensor::scalar(loss), tracked(feats_source) || tracked(feats_target));
    if (nodes_[size_t(out.id)].track)
        tape_.push_back([this, feats_source, feats_target, out, side_s, side_t,
                         f] {
            const double g = grad_buf(out)[0];
            std::vector<double> gmat(std::size_t(f) * f);
            for (std::size_t i = 0; i < gmat.size(); ++i)
                gmat[i] = 2.0 * g * (side_s->logm[i] - side_t->logm[i]);
            if (tracked(feats_source)) {
                auto dx = coral_backward(*side_s, gmat);
                Tensor& gs = grad_buf(feats_source);
                for (std::size_t i = 0; i < dx.size(); ++i) gs[i] += dx[i];
            }
            if (tracked(feats_target)) {
                for (auto& vv : gmat) vv = -vv;
                auto dx = coral_backward(*side_t, gmat);
                Tensor& gt = grad_buf(feats_target);
                for (std::size_t i = 0; i < dx.size(); ++i) gt[i] += dx[i];
            }
        });
    return out;
}

}  // namespace xmuda
