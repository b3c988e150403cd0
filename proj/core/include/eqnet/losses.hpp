#pragma once

#include "eqnet/tensor.hpp"

namespace eqnet {

struct LossValue {
    double value;
    Tensor grad;  // w.r.t. the prediction, same shape
};

// Mean squared error over all elements (batch included in the average).
LossValue mse_loss(const Tensor& pred, const Tensor& target);

// Binary cross-entropy, target entries in {0,1}, predictions in [0,1].
// Predictions are clamped to [eps, 1-eps] before the logs.
LossValue bce_loss(const Tensor& pred, const Tensor& target, double eps = 1e-12);

}  // namespace eqnet
