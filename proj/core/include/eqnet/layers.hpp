#pragma once

#include <memory>
#include <string>
#include <vector>

#include "eqnet/tensor.hpp"

namespace eqnet {

enum class Activation { none, relu, sigmoid };

double apply_activation(double x, Activation act);

class Layer {
public:
    virtual ~Layer() = default;

    // Pure inference pass; no state is touched, safe to call concurrently.
    virtual Tensor infer(const Tensor& x) const = 0;

    // Training pass: like infer but caches what backward needs.
    virtual Tensor forward(const Tensor& x) = 0;

    // Propagates the loss gradient, accumulating into the parameter
    // gradients. Requires a preceding forward.
    virtual Tensor backward(const Tensor& grad_out) = 0;

    virtual void zero_grad() = 0;
    virtual std::vector<Tensor*> params() = 0;
    virtual std::vector<const Tensor*> params() const = 0;
    virtual std::vector<Tensor*> grads() = 0;
    virtual std::string kind() const = 0;
    virtual std::unique_ptr<Layer> clone() const = 0;

    std::size_t param_count() const {
        std::size_t n = 0;
        for (const Tensor* p : params()) n += p->size();
        return n;
    }
};

// 1-D convolution, kernel size K odd, zero padding (K-1)/2 on both ends so
// the output length equals the input length. Input [C,n] or [B,C,n].
class ConvLayer : public Layer {
public:
    ConvLayer(int in_channels, int out_channels, int kernel_size, bool relu_enabled);

    Tensor infer(const Tensor& x) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

    void zero_grad() override;
    std::vector<Tensor*> params() override { return {&weights_, &bias_}; }
    std::vector<const Tensor*> params() const override { return {&weights_, &bias_}; }
    std::vector<Tensor*> grads() override { return {&grad_weights_, &grad_bias_}; }
    std::string kind() const override { return "conv"; }
    std::unique_ptr<Layer> clone() const override { return std::make_unique<ConvLayer>(*this); }

    int in_channels() const { return in_channels_; }
    int out_channels() const { return out_channels_; }
    int kernel_size() const { return kernel_size_; }
    int padding() const { return (kernel_size_ - 1) / 2; }
    bool relu_enabled() const { return relu_; }

    Tensor& weights() { return weights_; }
    Tensor& bias() { return bias_; }
    const Tensor& weights() const { return weights_; }
    const Tensor& bias() const { return bias_; }

private:
    Tensor run(const Tensor& x, Tensor* pre_cache) const;

    int in_channels_;
    int out_channels_;
    int kernel_size_;
    bool relu_;
    Tensor weights_;       // [M,C,K]
    Tensor bias_;          // [M]
    Tensor grad_weights_;
    Tensor grad_bias_;

    Tensor input_cache_;   // [B,C,n]
    Tensor pre_cache_;     // pre-activation, [B,M,n]
    bool has_cache_ = false;
};

// Fully connected layer y = act(Wx + b). Input [in] or [B,in].
class DenseLayer : public Layer {
public:
    DenseLayer(int in_width, int out_width, Activation activation);

    Tensor infer(const Tensor& x) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

    void zero_grad() override;
    std::vector<Tensor*> params() override { return {&weights_, &bias_}; }
    std::vector<const Tensor*> params() const override { return {&weights_, &bias_}; }
    std::vector<Tensor*> grads() override { return {&grad_weights_, &grad_bias_}; }
    std::string kind() const override { return "dense"; }
    std::unique_ptr<Layer> clone() const override { return std::make_unique<DenseLayer>(*this); }

    int in_width() const { return in_width_; }
    int out_width() const { return out_width_; }
    Activation activation() const { return activation_; }

    Tensor& weights() { return weights_; }
    Tensor& bias() { return bias_; }
    const Tensor& weights() const { return weights_; }
    const Tensor& bias() const { return bias_; }

private:
    Tensor run(const Tensor& x, Tensor* out_cache) const;

    int in_width_;
    int out_width_;
    Activation activation_;
    Tensor weights_;       // [out,in]
    Tensor bias_;          // [out]
    Tensor grad_weights_;
    Tensor grad_bias_;

    Tensor input_cache_;   // [B,in]
    Tensor output_cache_;  // post-activation, [B,out]
    bool has_cache_ = false;
};

}  // namespace eqnet
