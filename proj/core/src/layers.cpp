#include "eqnet/layers.hpp"

#include <algorithm>
#include <cmath>

namespace eqnet {

namespace {

constexpr double kSigmoidDerivEps = 1e-12;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Derivative through the stored activation y = sigmoid(x). y is clamped
// away from {0,1} so that the BCE/sigmoid composition stays bounded when
// the forward pass saturates in double precision.
double sigmoid_deriv(double y) {
    double c = std::clamp(y, kSigmoidDerivEps, 1.0 - kSigmoidDerivEps);
    return c * (1.0 - c);
}

}  // namespace

double apply_activation(double x, Activation act) {
    switch (act) {
        case Activation::none: return x;
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::sigmoid: return sigmoid(x);
    }
    return x;
}

// ---------------------------------------------------------------------------
// ConvLayer

ConvLayer::ConvLayer(int in_channels, int out_channels, int kernel_size, bool relu_enabled)
    : in_channels_(in_channels),
      out_channels_(out_channels),
      kernel_size_(kernel_size),
      relu_(relu_enabled) {
    if (in_channels < 1 || out_channels < 1) throw ShapeError("conv channel counts must be >= 1");
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw ShapeError("conv kernel size must be odd and >= 1");
    std::size_t m = static_cast<std::size_t>(out_channels);
    std::size_t c = static_cast<std::size_t>(in_channels);
    std::size_t k = static_cast<std::size_t>(kernel_size);
    weights_ = Tensor({m, c, k});
    bias_ = Tensor({m});
    grad_weights_ = Tensor({m, c, k});
    grad_bias_ = Tensor({m});
}

Tensor ConvLayer::run(const Tensor& x, Tensor* pre_cache) const {
    if (x.rank() < 2 || x.rank() > 3) throw ShapeError("conv input must be [C,n] or [B,C,n]");
    bool batched = x.rank() == 3;
    std::size_t batch = batched ? x.dim(0) : 1;
    std::size_t chans = batched ? x.dim(1) : x.dim(0);
    std::size_t n = batched ? x.dim(2) : x.dim(1);
    if (chans != static_cast<std::size_t>(in_channels_))
        throw ShapeError("conv input channel count mismatch");
    require_finite(x, "conv input");

    std::size_t m = static_cast<std::size_t>(out_channels_);
    std::size_t kk = static_cast<std::size_t>(kernel_size_);
    int pad = padding();

    Tensor y = batched ? Tensor({batch, m, n}) : Tensor({m, n});
    const double* xd = x.data();
    double* yd = y.data();
    const double* wd = weights_.data();
    const double* bd = bias_.data();

    for (std::size_t b = 0; b < batch; ++b) {
        const double* xb = xd + b * chans * n;
        double* yb = yd + b * m * n;
        for (std::size_t i = 0; i < m; ++i) {
            double* yo = yb + i * n;
            std::fill(yo, yo + n, bd[i]);
            for (std::size_t c = 0; c < chans; ++c) {
                const double* xc = xb + c * n;
                const double* wrow = wd + (i * chans + c) * kk;
                for (std::size_t k = 0; k < kk; ++k) {
                    double w = wrow[k];
                    long off = static_cast<long>(k) - pad;
                    std::size_t j0 = off < 0 ? static_cast<std::size_t>(-off) : 0;
                    std::size_t j1 = off > 0 ? n - static_cast<std::size_t>(off) : n;
                    const double* xs = xc + off;
                    for (std::size_t j = j0; j < j1; ++j) yo[j] += w * xs[j];
                }
            }
        }
    }

    if (pre_cache) *pre_cache = y;
    if (relu_) {
        double* p = y.data();
        for (std::size_t i = 0; i < y.size(); ++i) p[i] = p[i] > 0.0 ? p[i] : 0.0;
    }
    return y;
}

Tensor ConvLayer::infer(const Tensor& x) const { return run(x, nullptr); }

Tensor ConvLayer::forward(const Tensor& x) {
    input_cache_ = x.rank() == 3 ? x : x.reshaped({1, x.dim(0), x.dim(1)});
    Tensor y = run(input_cache_, &pre_cache_);
    has_cache_ = true;
    return x.rank() == 3 ? y : y.reshaped({y.dim(1), y.dim(2)});
}

Tensor ConvLayer::backward(const Tensor& grad_out) {
    if (!has_cache_) throw StateError("conv backward before forward");
    bool batched = grad_out.rank() == 3;
    Tensor gy = batched ? grad_out : grad_out.reshaped({1, grad_out.dim(0), grad_out.dim(1)});
    if (!gy.same_shape(pre_cache_)) throw ShapeError("conv grad shape mismatch");

    std::size_t batch = gy.dim(0);
    std::size_t m = gy.dim(1);
    std::size_t n = gy.dim(2);
    std::size_t chans = static_cast<std::size_t>(in_channels_);
    std::size_t kk = static_cast<std::size_t>(kernel_size_);
    int pad = padding();

    // Gradient w.r.t. the pre-activation.
    Tensor gpre = gy;
    if (relu_) {
        const double* pre = pre_cache_.data();
        double* g = gpre.data();
        for (std::size_t i = 0; i < gpre.size(); ++i)
            if (pre[i] <= 0.0) g[i] = 0.0;
    }

    Tensor gx({batch, chans, n});
    const double* xd = input_cache_.data();
    const double* gd = gpre.data();
    const double* wd = weights_.data();
    double* dw = grad_weights_.data();
    double* db = grad_bias_.data();
    double* gxd = gx.data();

    for (std::size_t b = 0; b < batch; ++b) {
        const double* xb = xd + b * chans * n;
        const double* gb = gd + b * m * n;
        double* gxb = gxd + b * chans * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double* go = gb + i * n;
            double bsum = 0.0;
            for (std::size_t j = 0; j < n; ++j) bsum += go[j];
            db[i] += bsum;
            for (std::size_t c = 0; c < chans; ++c) {
                const double* xc = xb + c * n;
                double* gxc = gxb + c * n;
                double* dwrow = dw + (i * chans + c) * kk;
                const double* wrow = wd + (i * chans + c) * kk;
                for (std::size_t k = 0; k < kk; ++k) {
                    long off = static_cast<long>(k) - pad;
                    std::size_t j0 = off < 0 ? static_cast<std::size_t>(-off) : 0;
                    std::size_t j1 = off > 0 ? n - static_cast<std::size_t>(off) : n;
                    const double* xs = xc + off;
                    double* gxs = gxc + off;
                    double w = wrow[k];
                    double acc = 0.0;
                    for (std::size_t j = j0; j < j1; ++j) {
                        acc += go[j] * xs[j];
                        gxs[j] += go[j] * w;
                    }
                    dwrow[k] += acc;
                }
            }
        }
    }

    return batched ? gx : gx.reshaped({chans, n});
}

void ConvLayer::zero_grad() {
    grad_weights_.fill(0.0);
    grad_bias_.fill(0.0);
}

// ---------------------------------------------------------------------------
// DenseLayer

DenseLayer::DenseLayer(int in_width, int out_width, Activation activation)
    : in_width_(in_width), out_width_(out_width), activation_(activation) {
    if (in_width < 1 || out_width < 1) throw ShapeError("dense widths must be >= 1");
    std::size_t o = static_cast<std::size_t>(out_width);
    std::size_t i = static_cast<std::size_t>(in_width);
    weights_ = Tensor({o, i});
    bias_ = Tensor({o});
    grad_weights_ = Tensor({o, i});
    grad_bias_ = Tensor({o});
}

Tensor DenseLayer::run(const Tensor& x, Tensor* out_cache) const {
    if (x.rank() > 2) throw ShapeError("dense input must be [in] or [B,in]");
    bool batched = x.rank() == 2;
    std::size_t batch = batched ? x.dim(0) : 1;
    std::size_t in = batched ? x.dim(1) : x.dim(0);
    if (in != static_cast<std::size_t>(in_width_)) throw ShapeError("dense input width mismatch");
    require_finite(x, "dense input");

    std::size_t out = static_cast<std::size_t>(out_width_);
    Tensor y = batched ? Tensor({batch, out}) : Tensor({out});
    const double* xd = x.data();
    double* yd = y.data();
    const double* wd = weights_.data();
    const double* bd = bias_.data();

    for (std::size_t b = 0; b < batch; ++b) {
        const double* xb = xd + b * in;
        double* yb = yd + b * out;
        for (std::size_t o = 0; o < out; ++o) {
            const double* wrow = wd + o * in;
            double acc = bd[o];
            for (std::size_t i = 0; i < in; ++i) acc += wrow[i] * xb[i];
            yb[o] = apply_activation(acc, activation_);
        }
    }
    if (out_cache) *out_cache = y;
    return y;
}

Tensor DenseLayer::infer(const Tensor& x) const { return run(x, nullptr); }

Tensor DenseLayer::forward(const Tensor& x) {
    input_cache_ = x.rank() == 2 ? x : x.reshaped({1, x.dim(0)});
    Tensor y = run(input_cache_, &output_cache_);
    has_cache_ = true;
    return x.rank() == 2 ? y : y.reshaped({y.dim(1)});
}

Tensor DenseLayer::backward(const Tensor& grad_out) {
    if (!has_cache_) throw StateError("dense backward before forward");
    bool batched = grad_out.rank() == 2;
    Tensor gy = batched ? grad_out : grad_out.reshaped({1, grad_out.dim(0)});
    if (!gy.same_shape(output_cache_)) throw ShapeError("dense grad shape mismatch");

    std::size_t batch = gy.dim(0);
    std::size_t out = static_cast<std::size_t>(out_width_);
    std::size_t in = static_cast<std::size_t>(in_width_);

    Tensor gpre = gy;
    {
        double* g = gpre.data();
        const double* y = output_cache_.data();
        if (activation_ == Activation::relu) {
            for (std::size_t i = 0; i < gpre.size(); ++i)
                if (y[i] <= 0.0) g[i] = 0.0;
        } else if (activation_ == Activation::sigmoid) {
            for (std::size_t i = 0; i < gpre.size(); ++i) g[i] *= sigmoid_deriv(y[i]);
        }
    }

    Tensor gx({batch, in});
    const double* xd = input_cache_.data();
    const double* gd = gpre.data();
    const double* wd = weights_.data();
    double* dw = grad_weights_.data();
    double* db = grad_bias_.data();
    double* gxd = gx.data();

    for (std::size_t b = 0; b < batch; ++b) {
        const double* xb = xd + b * in;
        const double* gb = gd + b * out;
        double* gxb = gxd + b * in;
        for (std::size_t o = 0; o < out; ++o) {
            double g = gb[o];
            db[o] += g;
            const double* wrow = wd + o * in;
            double* dwrow = dw + o * in;
            for (std::size_t i = 0; i < in; ++i) {
                dwrow[i] += g * xb[i];
                gxb[i] += g * wrow[i];
            }
        }
    }

    return batched ? gx : gx.reshaped({in});
}

void DenseLayer::zero_grad() {
    grad_weights_.fill(0.0);
    grad_bias_.fill(0.0);
}

}  // namespace eqnet
