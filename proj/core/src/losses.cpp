#include "eqnet/losses.hpp"

#include <algorithm>
#include <cmath>

namespace eqnet {

LossValue mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) throw ShapeError("mse: prediction/target shape mismatch");
    std::size_t n = pred.size();
    Tensor grad(pred.shape());
    const double* p = pred.data();
    const double* t = target.data();
    double* g = grad.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = p[i] - t[i];
        sum += d * d;
        g[i] = 2.0 * d / static_cast<double>(n);
    }
    return {sum / static_cast<double>(n), std::move(grad)};
}

LossValue bce_loss(const Tensor& pred, const Tensor& target, double eps) {
    if (!pred.same_shape(target)) throw ShapeError("bce: prediction/target shape mismatch");
    std::size_t n = pred.size();
    Tensor grad(pred.shape());
    const double* p = pred.data();
    const double* t = target.data();
    double* g = grad.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p[i] >= 0.0 && p[i] <= 1.0))
            throw ShapeError("bce: prediction outside [0,1]");
        if (t[i] != 0.0 && t[i] != 1.0) throw ShapeError("bce: target not a bit");
        double c = std::clamp(p[i], eps, 1.0 - eps);
        sum -= t[i] * std::log(c) + (1.0 - t[i]) * std::log(1.0 - c);
        g[i] = (c - t[i]) / (c * (1.0 - c) * static_cast<double>(n));
    }
    return {sum / static_cast<double>(n), std::move(grad)};
}

}  // namespace eqnet
