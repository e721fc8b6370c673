#pragma once

#include "loadcast/common.hpp"
#include "loadcast/nn/tensor.hpp"

namespace loadcast::nn {

/// Mean of squared elementwise differences.
inline double mse_loss(const Matrix& pred, const Matrix& target) {
    if (!pred.same_shape(target)) throw DimensionError("mse_loss: shape mismatch");
    if (pred.empty()) throw DimensionError("mse_loss: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.v.size(); ++i) {
        const double d = pred.v[i] - target.v[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.v.size());
}

/// dL/dpred = 2*(pred - target)/count.
inline Matrix mse_loss_grad(const Matrix& pred, const Matrix& target) {
    if (!pred.same_shape(target)) throw DimensionError("mse_loss_grad: shape mismatch");
    if (pred.empty()) throw DimensionError("mse_loss_grad: empty input");
    Matrix grad(pred.rows, pred.cols);
    const double scale = 2.0 / static_cast<double>(pred.v.size());
    for (std::size_t i = 0; i < pred.v.size(); ++i)
        grad.v[i] = scale * (pred.v[i] - target.v[i]);
    return grad;
}

}  // namespace loadcast::nn
