#pragma once

#include <chrono>
#include <numeric>
#include <string>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/window.hpp"
#include "loadcast/forecast/model.hpp"
#include "loadcast/nn/loss.hpp"
#include "loadcast/rng.hpp"

namespace loadcast::forecast {

struct TrainReport {
    std::vector<double> train_loss;  // per-epoch MSE, standardized units
    std::vector<double> val_loss;
    std::size_t epochs_run = 0;
    double wall_seconds = 0.0;
};

namespace detail {

inline void gather_batch(const data::WindowedDataset& ds, const std::vector<std::size_t>& order,
                         std::size_t begin, std::size_t end, nn::Tensor3& x, nn::Matrix& y) {
    const std::size_t n = end - begin;
    x = nn::Tensor3(n, ds.inputs.steps, ds.inputs.feats);
    y = nn::Matrix(n, ds.targets.cols);
    const std::size_t in_stride = ds.inputs.steps * ds.inputs.feats;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[begin + i];
        std::copy_n(ds.inputs.v.data() + src * in_stride, in_stride, x.v.data() + i * in_stride);
        std::copy_n(ds.targets.row(src), ds.targets.cols, y.row(i));
    }
}

inline double dataset_mse(const ForecastModel& m, const data::WindowedDataset& ds) {
    const nn::Matrix pred = predict_batch(m, ds.inputs);
    return nn::mse_loss(pred, ds.targets);
}

}  // namespace detail

/// Minibatch SGD for exactly hp.epochs epochs. Shuffles with a seeded RNG
/// each epoch, keeps the last short batch, records train and validation MSE
/// per epoch, and updates the model in place. Training loss is accumulated
/// from the forward passes as the epoch runs, so it reflects the moving
/// parameters; validation runs after the epoch with dropout off.
inline TrainReport fit(ForecastModel& m, const data::WindowedDataset& train,
                       const data::WindowedDataset& val, const Hyperparams& hp,
                       std::uint64_t seed) {
    hp.validate();
    if (train.size() == 0 || val.size() == 0)
        throw UsageError("fit: train and validation datasets must be nonempty");
    if (train.inputs.steps != m.cfg.lookback_steps || train.inputs.feats != m.cfg.feature_count ||
        train.targets.cols != m.cfg.horizon)
        throw DimensionError("fit: training window shape does not match model config");
    if (val.inputs.steps != train.inputs.steps || val.inputs.feats != train.inputs.feats ||
        val.targets.cols != train.targets.cols)
        throw DimensionError("fit: validation window shape does not match training shape");

    const auto t0 = std::chrono::steady_clock::now();
    SeededRng base(seed);
    TrainReport report;
    GradientTape tape(m);
    ForwardCache cache;
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        SeededRng shuffle_rng = base.derive(2 * epoch);
        SeededRng dropout_rng = base.derive(2 * epoch + 1);
        shuffle(order, shuffle_rng);

        double sse = 0.0;
        std::size_t elems = 0;
        try {
            for (std::size_t begin = 0; begin < train.size(); begin += hp.batch_size) {
                const std::size_t end = std::min(begin + hp.batch_size, train.size());
                nn::Tensor3 xb;
                nn::Matrix yb;
                detail::gather_batch(train, order, begin, end, xb, yb);

                tape.zero();
                const nn::Matrix pred = model_forward(m, xb, /*training=*/true, dropout_rng, &cache);
                const double batch_mse = nn::mse_loss(pred, yb);
                if (!is_finite(batch_mse))
                    throw NumericError("non-finite training loss");
                sse += batch_mse * static_cast<double>(pred.v.size());
                elems += pred.v.size();

                const nn::Matrix grad = nn::mse_loss_grad(pred, yb);
                model_backward(m, cache, grad, tape);
                optimizer_step(m, tape, hp.learning_rate);
            }
            report.train_loss.push_back(sse / static_cast<double>(elems));
            report.val_loss.push_back(detail::dataset_mse(m, val));
            if (!is_finite(report.val_loss.back()))
                throw NumericError("non-finite validation loss");
        } catch (const NumericError& e) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch + 1) +
                                  ": " + e.what());
        }
        ++report.epochs_run;
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace loadcast::forecast
