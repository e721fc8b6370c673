#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/nn/tensor.hpp"
#include "loadcast/rng.hpp"

namespace loadcast::nn {

enum class Activation { Relu, Linear };

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

/// Derivative of relu w.r.t. its input. The subgradient at 0 is fixed to 0.
inline double relu_grad(double pre) { return pre > 0.0 ? 1.0 : 0.0; }

// ---------------------------------------------------------------------------
// Parameter bundles and their gradient mirrors
// ---------------------------------------------------------------------------

struct DenseParams {
    Matrix w;               // in_dim x out_dim
    std::vector<double> b;  // out_dim
    Activation act = Activation::Linear;

    std::size_t in_dim() const { return w.rows; }
    std::size_t out_dim() const { return w.cols; }
    std::size_t param_count() const { return w.size() + b.size(); }
};

struct DenseGrad {
    Matrix w;
    std::vector<double> b;

    DenseGrad() = default;
    explicit DenseGrad(const DenseParams& p) : w(p.w.rows, p.w.cols), b(p.b.size(), 0.0) {}
    void zero() {
        w.fill(0.0);
        std::fill(b.begin(), b.end(), 0.0);
    }
};

struct AttentionParams {
    std::size_t head_count = 0;
    std::size_t head_dim = 0;
    Matrix wq, wk, wv;              // model_dim x (head_count*head_dim)
    std::vector<double> bq, bk, bv;
    Matrix wo;                      // (head_count*head_dim) x model_dim
    std::vector<double> bo;
    double dropout_rate = 0.0;

    std::size_t model_dim() const { return wq.rows; }
    std::size_t proj_dim() const { return head_count * head_dim; }
    std::size_t param_count() const {
        return wq.size() + wk.size() + wv.size() + wo.size() + bq.size() + bk.size() +
               bv.size() + bo.size();
    }

    void validate() const {
        if (head_count == 0 || head_dim == 0)
            throw ConfigError("attention: head_count and head_dim must be positive");
        if (dropout_rate < 0.0 || dropout_rate >= 1.0)
            throw ConfigError("attention: dropout_rate must be in [0,1)");
        const std::size_t p = proj_dim();
        if (wq.cols != p || wk.cols != p || wv.cols != p || wo.rows != p)
            throw DimensionError("attention: projection width != head_count*head_dim");
        if (wk.rows != wq.rows || wv.rows != wq.rows || wo.cols != wq.rows)
            throw DimensionError("attention: inconsistent model dimension");
        if (bq.size() != p || bk.size() != p || bv.size() != p || bo.size() != wo.cols)
            throw DimensionError("attention: bias length mismatch");
    }
};

struct AttentionGrad {
    Matrix wq, wk, wv, wo;
    std::vector<double> bq, bk, bv, bo;

    AttentionGrad() = default;
    explicit AttentionGrad(const AttentionParams& p)
        : wq(p.wq.rows, p.wq.cols), wk(p.wk.rows, p.wk.cols), wv(p.wv.rows, p.wv.cols),
          wo(p.wo.rows, p.wo.cols), bq(p.bq.size(), 0.0), bk(p.bk.size(), 0.0),
          bv(p.bv.size(), 0.0), bo(p.bo.size(), 0.0) {}
    void zero() {
        wq.fill(0.0);
        wk.fill(0.0);
        wv.fill(0.0);
        wo.fill(0.0);
        std::fill(bq.begin(), bq.end(), 0.0);
        std::fill(bk.begin(), bk.end(), 0.0);
        std::fill(bv.begin(), bv.end(), 0.0);
        std::fill(bo.begin(), bo.end(), 0.0);
    }
};

struct LayerNormParams {
    std::vector<double> gain;
    std::vector<double> bias;
    double epsilon = 1e-5;

    std::size_t dim() const { return gain.size(); }
    std::size_t param_count() const { return gain.size() + bias.size(); }
};

struct LayerNormGrad {
    std::vector<double> gain, bias;

    LayerNormGrad() = default;
    explicit LayerNormGrad(const LayerNormParams& p)
        : gain(p.gain.size(), 0.0), bias(p.bias.size(), 0.0) {}
    void zero() {
        std::fill(gain.begin(), gain.end(), 0.0);
        std::fill(bias.begin(), bias.end(), 0.0);
    }
};

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

/// Uniform in +-sqrt(6/(fan_in+fan_out)).
inline void glorot_uniform(Matrix& w, SeededRng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
    for (double& x : w.v) x = rng.uniform(-limit, limit);
}

inline DenseParams make_dense(std::size_t in_dim, std::size_t out_dim, Activation act,
                              SeededRng& rng) {
    DenseParams p;
    p.w = Matrix(in_dim, out_dim);
    glorot_uniform(p.w, rng);
    p.b.assign(out_dim, 0.0);
    p.act = act;
    return p;
}

inline AttentionParams make_attention(std::size_t model_dim, std::size_t head_count,
                                      std::size_t head_dim, double dropout_rate,
                                      SeededRng& rng) {
    AttentionParams p;
    p.head_count = head_count;
    p.head_dim = head_dim;
    p.dropout_rate = dropout_rate;
    const std::size_t proj = head_count * head_dim;
    p.wq = Matrix(model_dim, proj);
    p.wk = Matrix(model_dim, proj);
    p.wv = Matrix(model_dim, proj);
    p.wo = Matrix(proj, model_dim);
    glorot_uniform(p.wq, rng);
    glorot_uniform(p.wk, rng);
    glorot_uniform(p.wv, rng);
    glorot_uniform(p.wo, rng);
    p.bq.assign(proj, 0.0);
    p.bk.assign(proj, 0.0);
    p.bv.assign(proj, 0.0);
    p.bo.assign(model_dim, 0.0);
    p.validate();
    return p;
}

inline LayerNormParams make_layer_norm(std::size_t dim, double epsilon = 1e-5) {
    if (epsilon <= 0.0) throw ConfigError("layer norm: epsilon must be positive");
    LayerNormParams p;
    p.gain.assign(dim, 1.0);
    p.bias.assign(dim, 0.0);
    p.epsilon = epsilon;
    return p;
}

// ---------------------------------------------------------------------------
// Dense
// ---------------------------------------------------------------------------

struct DenseCache {
    Matrix input;  // n x in_dim
    Matrix pre;    // n x out_dim, pre-activation
};

/// y = act(x*W + b). Pass a cache to enable a later backward call.
inline Matrix dense_forward(const Matrix& x, const DenseParams& p, DenseCache* cache = nullptr) {
    if (x.cols != p.in_dim())
        throw DimensionError("dense_forward: input has " + std::to_string(x.cols) +
                             " columns, layer expects " + std::to_string(p.in_dim()));
    Matrix pre = matmul(x, p.w);
    for (std::size_t i = 0; i < pre.rows; ++i) {
        double* row = pre.row(i);
        for (std::size_t j = 0; j < pre.cols; ++j) row[j] += p.b[j];
    }
    Matrix out = pre;
    if (p.act == Activation::Relu)
        for (double& x_ : out.v) x_ = relu(x_);
    if (!out.all_finite()) throw NumericError("dense_forward: non-finite output");
    if (cache) {
        cache->input = x;
        cache->pre = std::move(pre);
    }
    return out;
}

/// Accumulates dW, db into `grad` and returns dL/dx.
inline Matrix dense_backward(const Matrix& grad_out, const DenseParams& p,
                             const DenseCache& cache, DenseGrad& grad) {
    if (cache.input.empty()) throw UsageError("dense_backward: no cached forward pass");
    if (!grad_out.same_shape(cache.pre))
        throw DimensionError("dense_backward: gradient shape mismatch");
    Matrix dpre = grad_out;
    if (p.act == Activation::Relu)
        for (std::size_t i = 0; i < dpre.v.size(); ++i) dpre.v[i] *= relu_grad(cache.pre.v[i]);
    Matrix dw = matmul_tn(cache.input, dpre);
    for (std::size_t i = 0; i < dw.v.size(); ++i) grad.w.v[i] += dw.v[i];
    for (std::size_t i = 0; i < dpre.rows; ++i) {
        const double* row = dpre.row(i);
        for (std::size_t j = 0; j < dpre.cols; ++j) grad.b[j] += row[j];
    }
    return matmul_nt(dpre, p.w);
}

// ---------------------------------------------------------------------------
// Dropout (inverted: survivors scaled by 1/(1-rate) at training time)
// ---------------------------------------------------------------------------

/// Fills `scales` with the per-element multipliers (0 for dropped, 1/(1-rate)
/// for kept) and applies them in place. At inference the call is an identity
/// and `scales`, when given, is filled with ones.
inline void dropout_apply(std::vector<double>& values, double rate, bool training,
                          SeededRng& rng, std::vector<double>* scales = nullptr) {
    if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropout: rate must be in [0,1)");
    if (scales) scales->assign(values.size(), 1.0);
    if (!training || rate == 0.0) return;
    const double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double s = rng.uniform() < rate ? 0.0 : keep_scale;
        values[i] *= s;
        if (scales) (*scales)[i] = s;
    }
}

inline Matrix dropout_apply(const Matrix& x, double rate, bool training, SeededRng& rng) {
    Matrix out = x;
    dropout_apply(out.v, rate, training, rng);
    return out;
}

inline Tensor3 dropout_apply(const Tensor3& x, double rate, bool training, SeededRng& rng) {
    Tensor3 out = x;
    dropout_apply(out.v, rate, training, rng);
    return out;
}

// ---------------------------------------------------------------------------
// Multi-head scaled dot-product self-attention
// ---------------------------------------------------------------------------

struct AttentionCache {
    std::size_t batch = 0, steps = 0;
    Matrix input;              // (batch*steps) x model_dim
    Matrix q, k, v;            // (batch*steps) x proj_dim
    std::vector<double> attn;  // batch*heads*steps*steps, post-softmax
    std::vector<double> drop;  // same layout; dropout multipliers used
    Matrix concat;             // (batch*steps) x proj_dim, heads side by side
};

/// Per head: softmax(Q K^T / sqrt(head_dim)) V; heads are concatenated and
/// projected back to model_dim. Dropout hits the attention weights only, and
/// only when training. The rng is consumed in a fixed (batch, head, row, col)
/// order so identical seeds replay identical masks.
inline Tensor3 attention_forward(const Tensor3& x, const AttentionParams& p, bool training,
                                 SeededRng& rng, AttentionCache* cache = nullptr) {
    p.validate();
    if (x.feats != p.model_dim())
        throw DimensionError("attention_forward: feature dim " + std::to_string(x.feats) +
                             " != model dim " + std::to_string(p.model_dim()));
    if (x.steps == 0) throw DimensionError("attention_forward: empty sequence");
    const std::size_t B = x.batch, T = x.steps, H = p.head_count, Dh = p.head_dim;
    const std::size_t P = p.proj_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(Dh));
    const bool use_dropout = training && p.dropout_rate > 0.0;
    const double keep_scale = use_dropout ? 1.0 / (1.0 - p.dropout_rate) : 1.0;

    Matrix m = x.as_matrix();  // (B*T) x D
    Matrix q = matmul(m, p.wq);
    Matrix k = matmul(m, p.wk);
    Matrix v = matmul(m, p.wv);
    for (std::size_t i = 0; i < q.rows; ++i)
        for (std::size_t j = 0; j < P; ++j) {
            q(i, j) += p.bq[j];
            k(i, j) += p.bk[j];
            v(i, j) += p.bv[j];
        }

    std::vector<double> attn(B * H * T * T, 0.0);
    std::vector<double> drop(B * H * T * T, 1.0);
    Matrix concat(B * T, P, 0.0);

    std::vector<double> row(T);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t h = 0; h < H; ++h) {
            const std::size_t off = h * Dh;
            double* a_head = attn.data() + (b * H + h) * T * T;
            double* d_head = drop.data() + (b * H + h) * T * T;
            for (std::size_t i = 0; i < T; ++i) {
                const double* qi = q.row(b * T + i) + off;
                double max_logit = -std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < T; ++j) {
                    const double* kj = k.row(b * T + j) + off;
                    double dot = 0.0;
                    for (std::size_t d = 0; d < Dh; ++d) dot += qi[d] * kj[d];
                    row[j] = dot * scale;
                    max_logit = std::max(max_logit, row[j]);
                }
                if (!is_finite(max_logit))
                    throw NumericError("attention: non-finite logits (head " +
                                       std::to_string(h) + ")");
                double sum = 0.0;
                for (std::size_t j = 0; j < T; ++j) {
                    row[j] = std::exp(row[j] - max_logit);
                    sum += row[j];
                }
                double* a_row = a_head + i * T;
                double* d_row = d_head + i * T;
                double* c_row = concat.row(b * T + i) + off;
                for (std::size_t j = 0; j < T; ++j) {
                    a_row[j] = row[j] / sum;
                    double used = a_row[j];
                    if (use_dropout) {
                        const double s = rng.uniform() < p.dropout_rate ? 0.0 : keep_scale;
                        d_row[j] = s;
                        used *= s;
                    }
                    const double* vj = v.row(b * T + j) + off;
                    for (std::size_t d = 0; d < Dh; ++d) c_row[d] += used * vj[d];
                }
            }
        }
    }

    Matrix out = matmul(concat, p.wo);
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t j = 0; j < out.cols; ++j) out(i, j) += p.bo[j];
    if (!out.all_finite()) throw NumericError("attention: non-finite output");

    if (cache) {
        cache->batch = B;
        cache->steps = T;
        cache->input = std::move(m);
        cache->q = std::move(q);
        cache->k = std::move(k);
        cache->v = std::move(v);
        cache->attn = std::move(attn);
        cache->drop = std::move(drop);
        cache->concat = std::move(concat);
    }
    return Tensor3::from_matrix(out, B, T, x.feats);
}

/// Accumulates parameter gradients into `grad` and returns dL/dx.
inline Tensor3 attention_backward(const Tensor3& grad_out, const AttentionParams& p,
                                  const AttentionCache& cache, AttentionGrad& grad) {
    if (cache.input.empty()) throw UsageError("attention_backward: no cached forward pass");
    const std::size_t B = cache.batch, T = cache.steps, H = p.head_count, Dh = p.head_dim;
    const std::size_t D = p.model_dim(), P = p.proj_dim();
    if (grad_out.batch != B || grad_out.steps != T || grad_out.feats != D)
        throw DimensionError("attention_backward: gradient shape mismatch");
    const double scale = 1.0 / std::sqrt(static_cast<double>(Dh));

    Matrix dy = grad_out.as_matrix();  // (B*T) x D
    // Output projection
    Matrix d_concat = matmul_nt(dy, p.wo);
    {
        Matrix dwo = matmul_tn(cache.concat, dy);
        for (std::size_t i = 0; i < dwo.v.size(); ++i) grad.wo.v[i] += dwo.v[i];
        for (std::size_t i = 0; i < dy.rows; ++i)
            for (std::size_t j = 0; j < D; ++j) grad.bo[j] += dy(i, j);
    }

    Matrix dq(B * T, P, 0.0), dk(B * T, P, 0.0), dv(B * T, P, 0.0);
    std::vector<double> da(T), ds(T);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t h = 0; h < H; ++h) {
            const std::size_t off = h * Dh;
            const double* a_head = cache.attn.data() + (b * H + h) * T * T;
            const double* d_head = cache.drop.data() + (b * H + h) * T * T;
            for (std::size_t i = 0; i < T; ++i) {
                const double* dci = d_concat.row(b * T + i) + off;
                const double* a_row = a_head + i * T;
                const double* d_row = d_head + i * T;
                // dA_used -> dV and (through dropout) dA
                for (std::size_t j = 0; j < T; ++j) {
                    const double* vj = cache.v.row(b * T + j) + off;
                    double* dvj = dv.row(b * T + j) + off;
                    double acc = 0.0;
                    const double used = a_row[j] * d_row[j];
                    for (std::size_t d = 0; d < Dh; ++d) {
                        acc += dci[d] * vj[d];
                        dvj[d] += used * dci[d];
                    }
                    da[j] = acc * d_row[j];
                }
                // softmax backward on this row
                double dot = 0.0;
                for (std::size_t j = 0; j < T; ++j) dot += da[j] * a_row[j];
                for (std::size_t j = 0; j < T; ++j) ds[j] = a_row[j] * (da[j] - dot);
                // dS -> dQ, dK
                double* dqi = dq.row(b * T + i) + off;
                const double* qi = cache.q.row(b * T + i) + off;
                for (std::size_t j = 0; j < T; ++j) {
                    const double g = ds[j] * scale;
                    const double* kj = cache.k.row(b * T + j) + off;
                    double* dkj = dk.row(b * T + j) + off;
                    for (std::size_t d = 0; d < Dh; ++d) {
                        dqi[d] += g * kj[d];
                        dkj[d] += g * qi[d];
                    }
                }
            }
        }
    }

    // Projection weights and input gradient
    Matrix dm = matmul_nt(dq, p.wq);
    {
        Matrix tmp = matmul_nt(dk, p.wk);
        for (std::size_t i = 0; i < dm.v.size(); ++i) dm.v[i] += tmp.v[i];
        tmp = matmul_nt(dv, p.wv);
        for (std::size_t i = 0; i < dm.v.size(); ++i) dm.v[i] += tmp.v[i];
    }
    {
        Matrix t = matmul_tn(cache.input, dq);
        for (std::size_t i = 0; i < t.v.size(); ++i) grad.wq.v[i] += t.v[i];
        t = matmul_tn(cache.input, dk);
        for (std::size_t i = 0; i < t.v.size(); ++i) grad.wk.v[i] += t.v[i];
        t = matmul_tn(cache.input, dv);
        for (std::size_t i = 0; i < t.v.size(); ++i) grad.wv.v[i] += t.v[i];
    }
    for (std::size_t i = 0; i < B * T; ++i)
        for (std::size_t j = 0; j < P; ++j) {
            grad.bq[j] += dq(i, j);
            grad.bk[j] += dk(i, j);
            grad.bv[j] += dv(i, j);
        }
    return Tensor3::from_matrix(dm, B, T, D);
}

// ---------------------------------------------------------------------------
// Layer normalization (per position, over the feature dimension)
// ---------------------------------------------------------------------------

struct LayerNormCache {
    std::size_t batch = 0, steps = 0;
    std::vector<double> x_hat;    // normalized values, batch*steps*dim
    std::vector<double> inv_std;  // batch*steps
};

inline Tensor3 layer_norm_forward(const Tensor3& x, const LayerNormParams& p,
                                  LayerNormCache* cache = nullptr) {
    const std::size_t D = p.dim();
    if (x.feats != D) throw DimensionError("layer_norm_forward: feature dim != gain length");
    Tensor3 out(x.batch, x.steps, x.feats);
    const std::size_t positions = x.batch * x.steps;
    std::vector<double> x_hat(cache ? x.size() : 0);
    std::vector<double> inv_stds(cache ? positions : 0);
    for (std::size_t pos = 0; pos < positions; ++pos) {
        const double* in = x.v.data() + pos * D;
        double* o = out.v.data() + pos * D;
        double mean = 0.0;
        for (std::size_t j = 0; j < D; ++j) mean += in[j];
        mean /= static_cast<double>(D);
        double var = 0.0;
        for (std::size_t j = 0; j < D; ++j) {
            const double d = in[j] - mean;
            var += d * d;
        }
        var /= static_cast<double>(D);
        const double inv_std = 1.0 / std::sqrt(var + p.epsilon);
        for (std::size_t j = 0; j < D; ++j) {
            const double xh = (in[j] - mean) * inv_std;
            o[j] = p.gain[j] * xh + p.bias[j];
            if (cache) x_hat[pos * D + j] = xh;
        }
        if (cache) inv_stds[pos] = inv_std;
    }
    if (cache) {
        cache->batch = x.batch;
        cache->steps = x.steps;
        cache->x_hat = std::move(x_hat);
        cache->inv_std = std::move(inv_stds);
    }
    return out;
}

inline Tensor3 layer_norm_backward(const Tensor3& grad_out, const LayerNormParams& p,
                                   const LayerNormCache& cache, LayerNormGrad& grad) {
    if (cache.x_hat.empty()) throw UsageError("layer_norm_backward: no cached forward pass");
    const std::size_t D = p.dim();
    if (grad_out.feats != D || grad_out.batch != cache.batch || grad_out.steps != cache.steps)
        throw DimensionError("layer_norm_backward: gradient shape mismatch");
    Tensor3 dx(grad_out.batch, grad_out.steps, D);
    const std::size_t positions = grad_out.batch * grad_out.steps;
    const double inv_d = 1.0 / static_cast<double>(D);
    for (std::size_t pos = 0; pos < positions; ++pos) {
        const double* dy = grad_out.v.data() + pos * D;
        const double* xh = cache.x_hat.data() + pos * D;
        double* out = dx.v.data() + pos * D;
        double sum_dxh = 0.0, sum_dxh_xh = 0.0;
        for (std::size_t j = 0; j < D; ++j) {
            grad.gain[j] += dy[j] * xh[j];
            grad.bias[j] += dy[j];
            const double dxh = dy[j] * p.gain[j];
            sum_dxh += dxh;
            sum_dxh_xh += dxh * xh[j];
        }
        const double inv_std = cache.inv_std[pos];
        for (std::size_t j = 0; j < D; ++j) {
            const double dxh = dy[j] * p.gain[j];
            out[j] = inv_std * (dxh - inv_d * sum_dxh - xh[j] * inv_d * sum_dxh_xh);
        }
    }
    return dx;
}

// ---------------------------------------------------------------------------
// Plain gradient-descent update
// ---------------------------------------------------------------------------

inline bool update_is_finite(const std::vector<double>& params, const std::vector<double>& grads,
                             double lr) {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (!is_finite(params[i] - lr * grads[i])) return false;
    return true;
}

inline void apply_update(std::vector<double>& params, const std::vector<double>& grads,
                         double lr) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grads[i];
}

/// theta <- theta - lr * grad for one parameter array. Rejects non-positive
/// learning rates and aborts (throwing, params untouched) if any updated
/// value would be non-finite.
inline void sgd_update(std::vector<double>& params, const std::vector<double>& grads, double lr) {
    if (lr <= 0.0) throw ConfigError("sgd_update: learning rate must be positive");
    if (params.size() != grads.size())
        throw DimensionError("sgd_update: parameter/gradient size mismatch");
    if (!update_is_finite(params, grads, lr))
        throw NumericError("sgd_update: non-finite update, step aborted");
    apply_update(params, grads, lr);
}

}  // namespace loadcast::nn
