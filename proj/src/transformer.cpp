#include "icl/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "icl/kernels.hpp"

namespace icl::tfm {

std::string pos_mode_name(PosMode p) {
    switch (p) {
        case PosMode::Learned: return "learned";
        case PosMode::Sinusoidal: return "sinusoidal";
        case PosMode::None: return "none";
    }
    return "?";
}

PosMode pos_mode_from_name(const std::string& name) {
    for (PosMode p : {PosMode::Learned, PosMode::Sinusoidal, PosMode::None})
        if (pos_mode_name(p) == name) return p;
    throw InvalidArgument("unknown positional mode: " + name);
}

void TransformerConfig::validate() const {
    require(n_layers >= 1 && n_layers <= 5, "n_layers must be in 1..5");
    require(n_heads >= 1, "n_heads must be positive");
    require(d_model >= 1 && d_model % n_heads == 0, "d_model must be divisible by n_heads");
    require(max_seq_len >= 2, "max_seq_len must be at least 2");
    require(vocab_size >= 2, "vocab_size must be at least 2");
}

Matrix<double> sinusoidal_positions(int max_seq_len, int d_model) {
    require(d_model % 2 == 0, "sinusoidal positions need an even dimension");
    require(max_seq_len >= 1, "max_seq_len must be positive");
    Matrix<double> pe(max_seq_len, d_model);
    for (int t = 0; t < max_seq_len; ++t) {
        for (int i = 0; 2 * i < d_model; ++i) {
            const double freq = std::pow(10000.0, 2.0 * i / d_model);
            pe(t, 2 * i) = std::sin(t / freq);
            pe(t, 2 * i + 1) = std::cos(t / freq);
        }
    }
    return pe;
}

namespace {

constexpr double kLnEps = 1e-5;

template <class Real>
Real gelu(Real x) {
    const Real c = Real(0.7978845608028654);  // sqrt(2/pi)
    const Real u = c * (x + Real(0.044715) * x * x * x);
    return Real(0.5) * x * (Real(1) + std::tanh(u));
}

template <class Real>
Real gelu_grad(Real x) {
    const Real c = Real(0.7978845608028654);
    const Real u = c * (x + Real(0.044715) * x * x * x);
    const Real t = std::tanh(u);
    const Real du = c * (Real(1) + Real(3) * Real(0.044715) * x * x);
    return Real(0.5) * (Real(1) + t) + Real(0.5) * x * (Real(1) - t * t) * du;
}

// y = g * xhat + b rowwise; caches xhat and rstd
template <class Real>
void layernorm_forward(const Matrix<Real>& x, const Matrix<Real>& g, const Matrix<Real>& b,
                       Matrix<Real>& y, Matrix<Real>& xhat, std::vector<Real>& rstd) {
    const int rows = x.rows(), d = x.cols();
    for (int r = 0; r < rows; ++r) {
        const Real* xr = x.row(r);
        Real mean = 0;
        for (int c = 0; c < d; ++c) mean += xr[c];
        mean /= static_cast<Real>(d);
        Real var = 0;
        for (int c = 0; c < d; ++c) var += (xr[c] - mean) * (xr[c] - mean);
        var /= static_cast<Real>(d);
        const Real rs = Real(1) / std::sqrt(var + static_cast<Real>(kLnEps));
        rstd[static_cast<std::size_t>(r)] = rs;
        Real* xh = xhat.row(r);
        Real* yr = y.row(r);
        for (int c = 0; c < d; ++c) {
            xh[c] = (xr[c] - mean) * rs;
            yr[c] = g.data()[c] * xh[c] + b.data()[c];
        }
    }
}

// accumulates dx (+=), dg, db from dy
template <class Real>
void layernorm_backward(const Matrix<Real>& dy, const Matrix<Real>& xhat,
                        const std::vector<Real>& rstd, const Matrix<Real>& g, Matrix<Real>& dx,
                        Matrix<Real>& dg, Matrix<Real>& db) {
    const int rows = dy.rows(), d = dy.cols();
    for (int r = 0; r < rows; ++r) {
        const Real* dyr = dy.row(r);
        const Real* xh = xhat.row(r);
        Real* dxr = dx.row(r);
        Real sum1 = 0, sum2 = 0;
        for (int c = 0; c < d; ++c) {
            const Real dxh = dyr[c] * g.data()[c];
            sum1 += dxh;
            sum2 += dxh * xh[c];
            dg.data()[c] += dyr[c] * xh[c];
            db.data()[c] += dyr[c];
        }
        sum1 /= static_cast<Real>(d);
        sum2 /= static_cast<Real>(d);
        const Real rs = rstd[static_cast<std::size_t>(r)];
        for (int c = 0; c < d; ++c)
            dxr[c] += rs * (dyr[c] * g.data()[c] - sum1 - xh[c] * sum2);
    }
}

// y = x W + b (broadcast bias)
template <class Real>
void linear_forward(const Matrix<Real>& x, const Matrix<Real>& w, const Matrix<Real>& b,
                    Matrix<Real>& y) {
    kern::gemm(kern::Trans::no, kern::Trans::no, x.rows(), w.cols(), x.cols(), Real(1), x.data(),
               x.cols(), w.data(), w.cols(), Real(0), y.data(), y.cols());
    for (int r = 0; r < y.rows(); ++r) {
        Real* yr = y.row(r);
        for (int c = 0; c < y.cols(); ++c) yr[c] += b.data()[c];
    }
}

// dW += x^T dy; db += colsum(dy); dx += dy W^T
template <class Real>
void linear_backward(const Matrix<Real>& x, const Matrix<Real>& w, const Matrix<Real>& dy,
                     Matrix<Real>& dw, Matrix<Real>& dbias, Matrix<Real>* dx) {
    kern::gemm(kern::Trans::yes, kern::Trans::no, x.cols(), dy.cols(), x.rows(), Real(1),
               x.data(), x.cols(), dy.data(), dy.cols(), Real(1), dw.data(), dw.cols());
    for (int r = 0; r < dy.rows(); ++r) {
        const Real* dyr = dy.row(r);
        for (int c = 0; c < dy.cols(); ++c) dbias.data()[c] += dyr[c];
    }
    if (dx)
        kern::gemm(kern::Trans::no, kern::Trans::yes, dy.rows(), w.rows(), dy.cols(), Real(1),
                   dy.data(), dy.cols(), w.data(), w.cols(), Real(1), dx->data(), dx->cols());
}

}  // namespace

template <class Real>
struct Transformer<Real>::Index {
    int tok_emb = -1, pos_emb = -1;
    struct Layer {
        int ln1_g, ln1_b, wq, bq, wk, bk, wv, bv, wo, bo;
        int ln2_g, ln2_b, w1, b1, w2, b2;
    };
    std::vector<Layer> layers;
    int lnf_g = -1, lnf_b = -1, w_out = -1, b_out = -1;
};

template <class Real>
Transformer<Real>::~Transformer() = default;
template <class Real>
Transformer<Real>::Transformer(Transformer&&) noexcept = default;
template <class Real>
Transformer<Real>& Transformer<Real>::operator=(Transformer&&) noexcept = default;

template <class Real>
Transformer<Real>::Transformer(const TransformerConfig& config)
    : config_(config), idx_(std::make_unique<Index>()) {
    config_.validate();
    const int d = config_.d_model;
    const int V = config_.vocab_size;

    idx_->tok_emb = params_.add("tok_emb", V, d);
    if (config_.pos == PosMode::Learned)
        idx_->pos_emb = params_.add("pos_emb", config_.max_seq_len, d);
    else if (config_.pos == PosMode::Sinusoidal)
        sin_table_ = sinusoidal_positions(config_.max_seq_len, d).template cast<Real>();

    for (int l = 0; l < config_.n_layers; ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        typename Index::Layer lay{};
        lay.ln1_g = params_.add(p + "ln1.g", 1, d);
        lay.ln1_b = params_.add(p + "ln1.b", 1, d);
        lay.wq = params_.add(p + "attn.wq", d, d);
        lay.bq = params_.add(p + "attn.bq", 1, d);
        lay.wk = params_.add(p + "attn.wk", d, d);
        lay.bk = params_.add(p + "attn.bk", 1, d);
        lay.wv = params_.add(p + "attn.wv", d, d);
        lay.bv = params_.add(p + "attn.bv", 1, d);
        lay.wo = params_.add(p + "attn.wo", d, d);
        lay.bo = params_.add(p + "attn.bo", 1, d);
        lay.ln2_g = params_.add(p + "ln2.g", 1, d);
        lay.ln2_b = params_.add(p + "ln2.b", 1, d);
        lay.w1 = params_.add(p + "ff.w1", d, 4 * d);
        lay.b1 = params_.add(p + "ff.b1", 1, 4 * d);
        lay.w2 = params_.add(p + "ff.w2", 4 * d, d);
        lay.b2 = params_.add(p + "ff.b2", 1, d);
        idx_->layers.push_back(lay);
    }
    idx_->lnf_g = params_.add("lnf.g", 1, d);
    idx_->lnf_b = params_.add("lnf.b", 1, d);
    idx_->w_out = params_.add("head.w", d, V);
    idx_->b_out = params_.add("head.b", 1, V);

    // scaled-normal init (std 0.02); layer norms start at identity
    Rng rng(Rng::derive(config_.seed, 0x7f31));
    auto gauss = [&rng]() {
        const double u1 = std::max(rng.uniform(), 1e-12);
        const double u2 = rng.uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };
    for (std::size_t i = 0; i < params_.values.size(); ++i) {
        const std::string& name = params_.names[i];
        Matrix<Real>& m = params_.values[i];
        if (name.find(".b") != std::string::npos && name.find("ln") == std::string::npos) {
            m.fill(Real(0));
        } else if (name.find("ln") != std::string::npos) {
            m.fill(name.ends_with(".g") ? Real(1) : Real(0));
        } else {
            for (std::size_t j = 0; j < m.size(); ++j)
                m.data()[j] = static_cast<Real>(0.02 * gauss());
        }
    }
}

namespace {

template <class Real>
struct LayerCache {
    Matrix<Real> x_in;          // residual stream entering the layer
    Matrix<Real> xhat1, xn1;    // LN1
    std::vector<Real> rstd1;
    Matrix<Real> q, k, v;       // projections
    std::vector<Matrix<Real>> probs;  // per (sentence, head) causal attention rows
    Matrix<Real> ctx;           // concatenated head outputs
    Matrix<Real> x_mid;         // after attention residual
    Matrix<Real> xhat2, xn2;    // LN2
    std::vector<Real> rstd2;
    Matrix<Real> h_pre, h_act;  // feed-forward hidden
};

template <class Real>
struct ForwardCache {
    int B = 0, T = 0;
    Matrix<Real> x0;
    std::vector<LayerCache<Real>> layers;
    Matrix<Real> xf_in, xhatf, xnf;
    std::vector<Real> rstdf;
    Matrix<Real> logits;
};

}  // namespace

template <class Real>
struct TfmImpl {
    using Cfg = TransformerConfig;

    static void run_forward(const Transformer<Real>& model, const Tensors<Real>& P,
                            const typename Transformer<Real>::Index& ix,
                            const Matrix<Real>& sin_table,
                            const std::vector<std::vector<int>>& batch,
                            ForwardCache<Real>& fc) {
        const Cfg& cfg = model.config();
        const int B = static_cast<int>(batch.size());
        require(B >= 1, "forward: empty batch");
        const int T = static_cast<int>(batch.front().size());
        require(T >= 1 && T <= cfg.max_seq_len, "forward: sequence length out of range");
        for (const auto& s : batch)
            require(static_cast<int>(s.size()) == T, "forward: ragged batch");
        const int d = cfg.d_model;
        const int bt = B * T;
        fc.B = B;
        fc.T = T;

        fc.x0 = Matrix<Real>(bt, d);
        const Matrix<Real>& emb = P[ix.tok_emb];
        for (int b = 0; b < B; ++b) {
            for (int t = 0; t < T; ++t) {
                const int tok = batch[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)];
                require(tok >= 0 && tok < cfg.vocab_size, "forward: token id out of range");
                Real* row = fc.x0.row(b * T + t);
                const Real* e = emb.row(tok);
                for (int c = 0; c < d; ++c) row[c] = e[c];
                if (cfg.pos == PosMode::Learned) {
                    const Real* p = P[ix.pos_emb].row(t);
                    for (int c = 0; c < d; ++c) row[c] += p[c];
                } else if (cfg.pos == PosMode::Sinusoidal) {
                    const Real* p = sin_table.row(t);
                    for (int c = 0; c < d; ++c) row[c] += p[c];
                }
            }
        }

        const int H = cfg.n_heads;
        const int dh = d / H;
        const Real scale = Real(1) / std::sqrt(static_cast<Real>(dh));
        fc.layers.assign(static_cast<std::size_t>(cfg.n_layers), {});
        Matrix<Real> x = fc.x0;

        for (int l = 0; l < cfg.n_layers; ++l) {
            LayerCache<Real>& lc = fc.layers[static_cast<std::size_t>(l)];
            const auto& li = ix.layers[static_cast<std::size_t>(l)];
            lc.x_in = x;
            lc.xhat1 = Matrix<Real>(bt, d);
            lc.xn1 = Matrix<Real>(bt, d);
            lc.rstd1.assign(static_cast<std::size_t>(bt), Real(0));
            layernorm_forward(lc.x_in, P[li.ln1_g], P[li.ln1_b], lc.xn1, lc.xhat1, lc.rstd1);

            lc.q = Matrix<Real>(bt, d);
            lc.k = Matrix<Real>(bt, d);
            lc.v = Matrix<Real>(bt, d);
            linear_forward(lc.xn1, P[li.wq], P[li.bq], lc.q);
            linear_forward(lc.xn1, P[li.wk], P[li.bk], lc.k);
            linear_forward(lc.xn1, P[li.wv], P[li.bv], lc.v);

            lc.ctx = Matrix<Real>(bt, d);
            lc.probs.assign(static_cast<std::size_t>(B * H), Matrix<Real>());
            // Cross-position reductions stay in plain mul-then-add form (this
            // TU has no FMA contraction), so position-blind configurations are
            // bitwise blind: swapped tokens swap rounded terms commutatively.
            for (int b = 0; b < B; ++b) {
                for (int h = 0; h < H; ++h) {
                    Matrix<Real>& pr = lc.probs[static_cast<std::size_t>(b * H + h)];
                    pr = Matrix<Real>(T, T);
                    for (int t = 0; t < T; ++t) {
                        const Real* qt = lc.q.row(b * T + t) + h * dh;
                        Real* row = pr.row(t);
                        for (int j = 0; j <= t; ++j) {
                            const Real* kj = lc.k.row(b * T + j) + h * dh;
                            Real s = 0;
                            for (int c = 0; c < dh; ++c) s += qt[c] * kj[c];
                            row[j] = s * scale;
                        }
                        for (int j = t + 1; j < T; ++j) row[j] = Real(-1e30);  // causal mask
                    }
                    kern::softmax_rows(pr.data(), T, T, T);
                    for (int t = 0; t < T; ++t) {
                        Real* ct = lc.ctx.row(b * T + t) + h * dh;
                        std::fill(ct, ct + dh, Real(0));
                        const Real* row = pr.row(t);
                        for (int j = 0; j <= t; ++j) {
                            const Real* vj = lc.v.row(b * T + j) + h * dh;
                            const Real w = row[j];
                            for (int c = 0; c < dh; ++c) ct[c] += w * vj[c];
                        }
                    }
                }
            }

            Matrix<Real> proj(bt, d);
            linear_forward(lc.ctx, P[li.wo], P[li.bo], proj);
            lc.x_mid = lc.x_in;
            for (std::size_t i = 0; i < lc.x_mid.size(); ++i)
                lc.x_mid.data()[i] += proj.data()[i];

            lc.xhat2 = Matrix<Real>(bt, d);
            lc.xn2 = Matrix<Real>(bt, d);
            lc.rstd2.assign(static_cast<std::size_t>(bt), Real(0));
            layernorm_forward(lc.x_mid, P[li.ln2_g], P[li.ln2_b], lc.xn2, lc.xhat2, lc.rstd2);

            lc.h_pre = Matrix<Real>(bt, 4 * d);
            linear_forward(lc.xn2, P[li.w1], P[li.b1], lc.h_pre);
            lc.h_act = Matrix<Real>(bt, 4 * d);
            for (std::size_t i = 0; i < lc.h_pre.size(); ++i)
                lc.h_act.data()[i] = gelu(lc.h_pre.data()[i]);

            Matrix<Real> ff(bt, d);
            linear_forward(lc.h_act, P[li.w2], P[li.b2], ff);
            x = lc.x_mid;
            for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += ff.data()[i];
        }

        fc.xf_in = x;
        fc.xhatf = Matrix<Real>(bt, d);
        fc.xnf = Matrix<Real>(bt, d);
        fc.rstdf.assign(static_cast<std::size_t>(bt), Real(0));
        layernorm_forward(fc.xf_in, P[ix.lnf_g], P[ix.lnf_b], fc.xnf, fc.xhatf, fc.rstdf);
        fc.logits = Matrix<Real>(bt, cfg.vocab_size);
        linear_forward(fc.xnf, P[ix.w_out], P[ix.b_out], fc.logits);
    }

    static double run_backward(const Transformer<Real>& model, const Tensors<Real>& P,
                               const typename Transformer<Real>::Index& ix,
                               const std::vector<std::vector<int>>& batch,
                               ForwardCache<Real>& fc, Tensors<Real>* grads) {
        const Cfg& cfg = model.config();
        const int B = fc.B, T = fc.T, d = cfg.d_model, V = cfg.vocab_size;
        const int bt = B * T;
        require(T >= 2, "loss needs at least two tokens per sentence");
        const int n_predict = B * (T - 1);

        // softmax + CE on predicting rows; dlogits reuses the buffer
        Matrix<Real>& dl = fc.logits;
        double loss = 0.0;
        for (int b = 0; b < B; ++b) {
            for (int t = 0; t < T; ++t) {
                Real* row = dl.row(b * T + t);
                if (t == T - 1) {
                    std::fill(row, row + V, Real(0));
                    continue;
                }
                kern::softmax_rows(row, 1, V, V);
                const int target = batch[static_cast<std::size_t>(b)][static_cast<std::size_t>(t + 1)];
                loss -= std::log(std::max(static_cast<double>(row[target]), 1e-300));
                if (grads) {
                    const Real inv = Real(1) / static_cast<Real>(n_predict);
                    for (int c = 0; c < V; ++c) row[c] *= inv;
                    row[target] -= inv;
                }
            }
        }
        loss /= n_predict;
        if (!grads) return loss;
        Tensors<Real>& G = *grads;

        Matrix<Real> dxnf(bt, d, Real(0));
        linear_backward(fc.xnf, P[ix.w_out], dl, G[ix.w_out], G[ix.b_out], &dxnf);
        Matrix<Real> dx(bt, d, Real(0));
        layernorm_backward(dxnf, fc.xhatf, fc.rstdf, P[ix.lnf_g], dx, G[ix.lnf_g],
                           G[ix.lnf_b]);

        const int H = cfg.n_heads;
        const int dh = d / H;
        const Real scale = Real(1) / std::sqrt(static_cast<Real>(dh));

        for (int l = cfg.n_layers - 1; l >= 0; --l) {
            LayerCache<Real>& lc = fc.layers[static_cast<std::size_t>(l)];
            const auto& li = ix.layers[static_cast<std::size_t>(l)];

            // feed-forward half: dx covers both the residual branch and ff output
            Matrix<Real> dh_act(bt, 4 * d, Real(0));
            linear_backward(lc.h_act, P[li.w2], dx, G[li.w2], G[li.b2], &dh_act);
            for (std::size_t i = 0; i < dh_act.size(); ++i)
                dh_act.data()[i] *= gelu_grad(lc.h_pre.data()[i]);
            Matrix<Real> dxn2(bt, d, Real(0));
            linear_backward(lc.xn2, P[li.w1], dh_act, G[li.w1], G[li.b1], &dxn2);
            layernorm_backward(dxn2, lc.xhat2, lc.rstd2, P[li.ln2_g], dx, G[li.ln2_g],
                               G[li.ln2_b]);

            // attention half
            Matrix<Real> dctx(bt, d, Real(0));
            linear_backward(lc.ctx, P[li.wo], dx, G[li.wo], G[li.bo], &dctx);
            Matrix<Real> dq(bt, d, Real(0)), dk(bt, d, Real(0)), dv(bt, d, Real(0));
            Matrix<Real> dp(T, T);
            for (int b = 0; b < B; ++b) {
                for (int h = 0; h < H; ++h) {
                    const Matrix<Real>& pr = lc.probs[static_cast<std::size_t>(b * H + h)];
                    const Real* dctx_blk = dctx.row(b * T) + h * dh;
                    const Real* vblk = lc.v.row(b * T) + h * dh;
                    kern::gemm(kern::Trans::no, kern::Trans::yes, T, T, dh, Real(1), dctx_blk,
                               d, vblk, d, Real(0), dp.data(), T);
                    Real* dvblk = dv.row(b * T) + h * dh;
                    kern::gemm(kern::Trans::yes, kern::Trans::no, T, dh, T, Real(1), pr.data(),
                               T, dctx_blk, d, Real(1), dvblk, d);
                    // softmax backward within each causal row
                    for (int t = 0; t < T; ++t) {
                        Real* dpr = dp.row(t);
                        const Real* prr = pr.row(t);
                        Real dot = 0;
                        for (int j = 0; j <= t; ++j) dot += dpr[j] * prr[j];
                        for (int j = 0; j <= t; ++j) dpr[j] = prr[j] * (dpr[j] - dot);
                        for (int j = t + 1; j < T; ++j) dpr[j] = Real(0);
                    }
                    Real* dqblk = dq.row(b * T) + h * dh;
                    const Real* kblk = lc.k.row(b * T) + h * dh;
                    kern::gemm(kern::Trans::no, kern::Trans::no, T, dh, T, scale, dp.data(), T,
                               kblk, d, Real(1), dqblk, d);
                    Real* dkblk = dk.row(b * T) + h * dh;
                    const Real* qblk = lc.q.row(b * T) + h * dh;
                    kern::gemm(kern::Trans::yes, kern::Trans::no, T, dh, T, scale, dp.data(), T,
                               qblk, d, Real(1), dkblk, d);
                }
            }
            Matrix<Real> dxn1(bt, d, Real(0));
            linear_backward(lc.xn1, P[li.wq], dq, G[li.wq], G[li.bq], &dxn1);
            linear_backward(lc.xn1, P[li.wk], dk, G[li.wk], G[li.bk], &dxn1);
            linear_backward(lc.xn1, P[li.wv], dv, G[li.wv], G[li.bv], &dxn1);
            layernorm_backward(dxn1, lc.xhat1, lc.rstd1, P[li.ln1_g], dx, G[li.ln1_g],
                               G[li.ln1_b]);
        }

        // embeddings
        Matrix<Real>& dtok = G[ix.tok_emb];
        for (int b = 0; b < B; ++b)
            for (int t = 0; t < T; ++t) {
                const int tok = batch[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)];
                kern::axpy(d, Real(1), dx.row(b * T + t), dtok.row(tok));
            }
        if (cfg.pos == PosMode::Learned) {
            Matrix<Real>& dpos = G[ix.pos_emb];
            for (int b = 0; b < B; ++b)
                for (int t = 0; t < T; ++t)
                    kern::axpy(d, Real(1), dx.row(b * T + t), dpos.row(t));
        }
        return loss;
    }
};

template <class Real>
Matrix<Real> Transformer<Real>::forward(const std::vector<std::vector<int>>& batch) const {
    ForwardCache<Real> fc;
    TfmImpl<Real>::run_forward(*this, params_, *idx_, sin_table_, batch, fc);
    return std::move(fc.logits);
}

template <class Real>
double Transformer<Real>::loss_and_grad(const std::vector<std::vector<int>>& batch,
                                        Tensors<Real>* grads) const {
    ForwardCache<Real> fc;
    TfmImpl<Real>::run_forward(*this, params_, *idx_, sin_table_, batch, fc);
    return TfmImpl<Real>::run_backward(*this, params_, *idx_, batch, fc, grads);
}

template <class Real>
Matrix<Real> Transformer<Real>::logits_for(std::span<const int> prompt) const {
    require(!prompt.empty(), "logits_for: empty prompt");
    return forward({std::vector<int>(prompt.begin(), prompt.end())});
}

template <class Real>
Prediction Transformer<Real>::predict(std::span<const int> prompt) const {
    const Matrix<Real> lg = logits_for(prompt);
    const Real* last = lg.row(lg.rows() - 1);
    std::vector<double> scores(static_cast<std::size_t>(lg.cols()));
    for (int c = 0; c < lg.cols(); ++c) scores[static_cast<std::size_t>(c)] = last[c];
    return predict_next(scores);
}

template <class Real>
TrainReport train_transformer(Transformer<Real>& model, const Corpus& corpus,
                              const TrainConfig& config, const EpochCallback& on_epoch) {
    require(!corpus.sentences.empty(), "train_transformer: empty corpus");
    Rng rng(Rng::derive(config.seed, 0x7a11));

    std::vector<std::size_t> order(corpus.sentences.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t n_val =
        static_cast<std::size_t>(config.val_fraction * static_cast<double>(order.size()));
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<long>(n_val));
    std::vector<std::size_t> train_idx(order.begin() + static_cast<long>(n_val), order.end());
    require(!train_idx.empty(), "train_transformer: empty training split");

    // group by sentence length so batches stay rectangular
    auto bucketize = [&corpus](const std::vector<std::size_t>& subset) {
        std::map<std::size_t, std::vector<std::size_t>> by_len;
        for (std::size_t i : subset) by_len[corpus.sentences[i].size()].push_back(i);
        std::vector<std::vector<std::size_t>> out;
        for (auto& [len, v] : by_len) out.push_back(std::move(v));
        return out;
    };
    const std::vector<std::vector<std::size_t>> val_buckets = bucketize(val_idx);

    Tensors<Real>& params = model.params();
    Tensors<Real> grads, m1, m2;
    for (std::size_t i = 0; i < params.values.size(); ++i) {
        grads.add(params.names[i], params.values[i].rows(), params.values[i].cols());
        m1.add(params.names[i], params.values[i].rows(), params.values[i].cols());
        m2.add(params.names[i], params.values[i].rows(), params.values[i].cols());
    }

    auto eval_loss = [&](const std::vector<std::vector<std::size_t>>& buckets) {
        double total = 0.0;
        long count = 0;
        std::vector<std::vector<int>> chunk;
        for (const auto& bucket : buckets) {
            for (std::size_t off = 0; off < bucket.size();
                 off += static_cast<std::size_t>(config.batch_size)) {
                chunk.clear();
                const std::size_t end =
                    std::min(bucket.size(), off + static_cast<std::size_t>(config.batch_size));
                long positions = 0;
                for (std::size_t i = off; i < end; ++i) {
                    chunk.push_back(corpus.sentences[bucket[i]]);
                    positions += static_cast<long>(chunk.back().size()) - 1;
                }
                total += model.loss_and_grad(chunk, nullptr) * static_cast<double>(positions);
                count += positions;
            }
        }
        return count == 0 ? 0.0 : total / static_cast<double>(count);
    };

    TrainReport report;
    double best = std::numeric_limits<double>::infinity();
    int bad_epochs = 0;
    long step = 0;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::vector<std::vector<std::size_t>> buckets = bucketize(train_idx);
        std::vector<std::vector<std::size_t>> batches;
        for (auto& bucket : buckets) {
            rng.shuffle(bucket);
            for (std::size_t off = 0; off < bucket.size();
                 off += static_cast<std::size_t>(config.batch_size))
                batches.emplace_back(
                    bucket.begin() + static_cast<long>(off),
                    bucket.begin() +
                        static_cast<long>(std::min(bucket.size(),
                                                   off + static_cast<std::size_t>(
                                                             config.batch_size))));
        }
        rng.shuffle(batches);

        double epoch_loss = 0.0;
        long epoch_positions = 0;
        std::vector<std::vector<int>> chunk;
        for (const auto& batch : batches) {
            chunk.clear();
            long positions = 0;
            for (std::size_t i : batch) {
                chunk.push_back(corpus.sentences[i]);
                positions += static_cast<long>(chunk.back().size()) - 1;
            }
            for (auto& g : grads.values) g.fill(Real(0));
            const double loss = model.loss_and_grad(chunk, &grads);
            if (!std::isfinite(loss)) throw TrainingFailure("transformer loss diverged");
            epoch_loss += loss * static_cast<double>(positions);
            epoch_positions += positions;

            ++step;
            const Real bc1 = Real(1) - static_cast<Real>(std::pow(config.beta1, step));
            const Real bc2 = Real(1) - static_cast<Real>(std::pow(config.beta2, step));
            for (std::size_t i = 0; i < params.values.size(); ++i)
                kern::adam_update(static_cast<int>(params.values[i].size()),
                                  params.values[i].data(), m1.values[i].data(),
                                  m2.values[i].data(), grads.values[i].data(),
                                  static_cast<Real>(config.lr), static_cast<Real>(config.beta1),
                                  static_cast<Real>(config.beta2),
                                  static_cast<Real>(config.adam_eps), bc1, bc2);
        }

        const double train_loss =
            epoch_positions == 0 ? 0.0 : epoch_loss / static_cast<double>(epoch_positions);
        const double val_loss = val_idx.empty() ? train_loss : eval_loss(val_buckets);
        if (!std::isfinite(val_loss)) throw TrainingFailure("transformer validation loss diverged");
        report.train_losses.push_back(train_loss);
        report.val_losses.push_back(val_loss);
        report.stopped_epoch = epoch;
        if (on_epoch) on_epoch(epoch, train_loss, val_loss);

        if (val_loss < best - config.min_delta) {
            best = val_loss;
            bad_epochs = 0;
        } else if (++bad_epochs >= config.patience) {
            break;
        }
    }
    report.best_val_loss = best;
    for (const auto& p : model.params().values)
        require(p.all_finite(), "non-finite parameters after training");
    return report;
}

template class Transformer<float>;
template class Transformer<double>;
template TrainReport train_transformer<float>(Transformer<float>&, const Corpus&,
                                              const TrainConfig&, const EpochCallback&);
template TrainReport train_transformer<double>(Transformer<double>&, const Corpus&,
                                               const TrainConfig&, const EpochCallback&);

}  // namespace icl::tfm
