#pragma once

#include <string>
#include <utility>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/forecast/config.hpp"
#include "loadcast/nn/layers.hpp"
#include "loadcast/nn/tensor.hpp"
#include "loadcast/rng.hpp"

namespace loadcast::forecast {

/// All layer parameters for the fixed topology: time-distributed dense ->
/// multi-head self-attention -> layer norm -> flatten -> hidden dense
/// stack -> linear output.
struct ForecastModel {
    ModelConfig cfg;
    nn::DenseParams td;
    nn::AttentionParams attn;
    nn::LayerNormParams norm;
    std::vector<nn::DenseParams> hidden;
    nn::DenseParams out;

    std::size_t param_count() const {
        std::size_t n = td.param_count() + attn.param_count() + norm.param_count() +
                        out.param_count();
        for (const auto& d : hidden) n += d.param_count();
        return n;
    }
};

/// Gradient buffers mirroring every parameter array of a ForecastModel.
struct GradientTape {
    nn::DenseGrad td;
    nn::AttentionGrad attn;
    nn::LayerNormGrad norm;
    std::vector<nn::DenseGrad> hidden;
    nn::DenseGrad out;

    GradientTape() = default;
    explicit GradientTape(const ForecastModel& m)
        : td(m.td), attn(m.attn), norm(m.norm), out(m.out) {
        hidden.reserve(m.hidden.size());
        for (const auto& d : m.hidden) hidden.emplace_back(d);
    }

    void zero() {
        td.zero();
        attn.zero();
        norm.zero();
        for (auto& d : hidden) d.zero();
        out.zero();
    }
};

/// Applies `fn(array)` to every parameter array in a fixed order. The same
/// order defines the serialization layout and the update sequence.
template <typename Model, typename Fn>
void visit_param_arrays(Model& m, Fn&& fn) {
    fn(m.td.w.v);
    fn(m.td.b);
    fn(m.attn.wq.v);
    fn(m.attn.bq);
    fn(m.attn.wk.v);
    fn(m.attn.bk);
    fn(m.attn.wv.v);
    fn(m.attn.bv);
    fn(m.attn.wo.v);
    fn(m.attn.bo);
    fn(m.norm.gain);
    fn(m.norm.bias);
    for (auto& d : m.hidden) {
        fn(d.w.v);
        fn(d.b);
    }
    fn(m.out.w.v);
    fn(m.out.b);
}

/// Applies `fn(param_array, grad_array)` pairwise in the same fixed order.
template <typename Model, typename Tape, typename Fn>
void visit_param_arrays(Model& m, Tape& t, Fn&& fn) {
    fn(m.td.w.v, t.td.w.v);
    fn(m.td.b, t.td.b);
    fn(m.attn.wq.v, t.attn.wq.v);
    fn(m.attn.bq, t.attn.bq);
    fn(m.attn.wk.v, t.attn.wk.v);
    fn(m.attn.bk, t.attn.bk);
    fn(m.attn.wv.v, t.attn.wv.v);
    fn(m.attn.bv, t.attn.bv);
    fn(m.attn.wo.v, t.attn.wo.v);
    fn(m.attn.bo, t.attn.bo);
    fn(m.norm.gain, t.norm.gain);
    fn(m.norm.bias, t.norm.bias);
    for (std::size_t i = 0; i < m.hidden.size(); ++i) {
        fn(m.hidden[i].w.v, t.hidden[i].w.v);
        fn(m.hidden[i].b, t.hidden[i].b);
    }
    fn(m.out.w.v, t.out.w.v);
    fn(m.out.b, t.out.b);
}

/// Seeded construction; identical (cfg, seed) pairs produce bit-identical
/// parameters because layers are initialized in a fixed order from one RNG.
inline ForecastModel build_model(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    SeededRng rng(seed);
    ForecastModel m;
    m.cfg = cfg;
    m.td = nn::make_dense(cfg.feature_count, cfg.td_dense_units, nn::Activation::Relu, rng);
    m.attn = nn::make_attention(cfg.td_dense_units, cfg.heads, cfg.head_dim, cfg.attn_dropout, rng);
    m.norm = nn::make_layer_norm(cfg.td_dense_units);
    std::size_t in_dim = cfg.flat_width();
    for (std::size_t i = 0; i < cfg.dense_layers; ++i) {
        m.hidden.push_back(nn::make_dense(in_dim, cfg.dense_units, nn::Activation::Relu, rng));
        in_dim = cfg.dense_units;
    }
    m.out = nn::make_dense(in_dim, cfg.horizon, nn::Activation::Linear, rng);
    return m;
}

/// Activation caches for one forward pass, consumed by model_backward.
struct ForwardCache {
    std::size_t batch = 0;
    nn::DenseCache td;
    nn::Tensor3 td_out;  // kept for the optional residual path
    nn::AttentionCache attn;
    nn::LayerNormCache norm;
    std::vector<nn::DenseCache> hidden;
    nn::DenseCache out;
};

inline void check_input_shape(const ModelConfig& cfg, const nn::Tensor3& x) {
    if (x.steps != cfg.lookback_steps || x.feats != cfg.feature_count)
        throw DimensionError("model input is " + std::to_string(x.steps) + "x" +
                             std::to_string(x.feats) + " per item, config expects " +
                             std::to_string(cfg.lookback_steps) + "x" +
                             std::to_string(cfg.feature_count));
    if (x.batch == 0) throw DimensionError("model input batch is empty");
}

/// Full forward pass. `rng` feeds attention dropout and is only consumed
/// when training is true and attn_dropout > 0.
inline nn::Matrix model_forward(const ForecastModel& m, const nn::Tensor3& x, bool training,
                                SeededRng& rng, ForwardCache* cache = nullptr) {
    check_input_shape(m.cfg, x);
    const std::size_t B = x.batch, T = m.cfg.lookback_steps;

    nn::Matrix td_rows = nn::dense_forward(x.as_matrix(), m.td, cache ? &cache->td : nullptr);
    nn::Tensor3 td_out = nn::Tensor3::from_matrix(td_rows, B, T, m.cfg.td_dense_units);

    nn::Tensor3 attn_out =
        nn::attention_forward(td_out, m.attn, training, rng, cache ? &cache->attn : nullptr);
    if (m.cfg.residual)
        for (std::size_t i = 0; i < attn_out.v.size(); ++i) attn_out.v[i] += td_out.v[i];

    nn::Tensor3 normed = nn::layer_norm_forward(attn_out, m.norm, cache ? &cache->norm : nullptr);

    nn::Matrix h = normed.flatten();
    if (cache) cache->hidden.resize(m.hidden.size());
    for (std::size_t i = 0; i < m.hidden.size(); ++i)
        h = nn::dense_forward(h, m.hidden[i], cache ? &cache->hidden[i] : nullptr);
    nn::Matrix y = nn::dense_forward(h, m.out, cache ? &cache->out : nullptr);

    if (cache) {
        cache->batch = B;
        cache->td_out = std::move(td_out);
    }
    return y;
}

/// Backpropagates dL/dy through the whole network, accumulating into
/// `tape`, and returns dL/dx.
inline nn::Tensor3 model_backward(const ForecastModel& m, const ForwardCache& cache,
                                  const nn::Matrix& grad_y, GradientTape& tape) {
    if (cache.batch == 0) throw UsageError("model_backward: no cached forward pass");
    const std::size_t B = cache.batch, T = m.cfg.lookback_steps;

    nn::Matrix g = nn::dense_backward(grad_y, m.out, cache.out, tape.out);
    for (std::size_t i = m.hidden.size(); i-- > 0;)
        g = nn::dense_backward(g, m.hidden[i], cache.hidden[i], tape.hidden[i]);

    nn::Tensor3 d_norm = nn::Tensor3::from_matrix(g, B, T, m.cfg.td_dense_units);
    nn::Tensor3 d_attn_in = nn::layer_norm_backward(d_norm, m.norm, cache.norm, tape.norm);

    nn::Tensor3 d_td = nn::attention_backward(d_attn_in, m.attn, cache.attn, tape.attn);
    if (m.cfg.residual)
        for (std::size_t i = 0; i < d_td.v.size(); ++i) d_td.v[i] += d_attn_in.v[i];

    nn::Matrix dx_rows = nn::dense_backward(d_td.as_matrix(), m.td, cache.td, tape.td);
    return nn::Tensor3::from_matrix(dx_rows, B, T, m.cfg.feature_count);
}

/// theta <- theta - lr * grad across every parameter array. All arrays are
/// checked before any is touched, so a rejected step leaves the model as it
/// was.
inline void optimizer_step(ForecastModel& m, const GradientTape& tape, double lr) {
    if (lr <= 0.0) throw ConfigError("optimizer_step: learning rate must be positive");
    bool ok = true;
    visit_param_arrays(m, tape, [&](std::vector<double>& p, const std::vector<double>& g) {
        if (p.size() != g.size())
            throw DimensionError("optimizer_step: tape shape mismatch");
        if (!nn::update_is_finite(p, g, lr)) ok = false;
    });
    if (!ok) throw NumericError("optimizer_step: non-finite update, step aborted");
    visit_param_arrays(m, tape, [&](std::vector<double>& p, const std::vector<double>& g) {
        nn::apply_update(p, g, lr);
    });
}

/// Inference on a batch of windows; dropout forced off.
inline nn::Matrix predict_batch(const ForecastModel& m, const nn::Tensor3& windows) {
    SeededRng unused(0);
    return model_forward(m, windows, /*training=*/false, unused);
}

/// Inference on one lookback x feature window; returns the standardized
/// horizon-length forecast.
inline std::vector<double> predict(const ForecastModel& m, const nn::Matrix& window) {
    if (window.rows != m.cfg.lookback_steps || window.cols != m.cfg.feature_count)
        throw DimensionError("predict: window is " + std::to_string(window.rows) + "x" +
                             std::to_string(window.cols) + ", config expects " +
                             std::to_string(m.cfg.lookback_steps) + "x" +
                             std::to_string(m.cfg.feature_count));
    nn::Tensor3 x(1, window.rows, window.cols);
    x.v = window.v;
    const nn::Matrix y = predict_batch(m, x);
    return {y.v.begin(), y.v.end()};
}

}  // namespace loadcast::forecast
