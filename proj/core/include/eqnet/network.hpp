#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "eqnet/layers.hpp"

namespace eqnet {

// A feed-forward chain of layers. Training (forward/backward) mutates the
// per-layer caches and is single-threaded; infer() is const and reentrant.
class Network {
public:
    Network() = default;
    Network(std::string kind, std::vector<int> structure, int kernel_size)
        : kind_(std::move(kind)), structure_(std::move(structure)), kernel_size_(kernel_size) {}

    Network(const Network& other) { *this = other; }
    Network& operator=(const Network& other) {
        if (this == &other) return *this;
        kind_ = other.kind_;
        structure_ = other.structure_;
        kernel_size_ = other.kernel_size_;
        layers_.clear();
        for (const auto& l : other.layers_) layers_.push_back(l->clone());
        return *this;
    }
    Network(Network&&) = default;
    Network& operator=(Network&&) = default;

    void add_layer(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

    Tensor infer(const Tensor& x) const {
        Tensor y = x;
        for (const auto& l : layers_) y = l->infer(y);
        return y;
    }

    Tensor forward(const Tensor& x) {
        Tensor y = x;
        for (auto& l : layers_) y = l->forward(y);
        return y;
    }

    // Returns the gradient w.r.t. the network input.
    Tensor backward(const Tensor& grad_out) {
        Tensor g = grad_out;
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
        return g;
    }

    void zero_grad() {
        for (auto& l : layers_) l->zero_grad();
    }

    std::size_t param_count() const {
        std::size_t n = 0;
        for (const auto& l : layers_) n += l->param_count();
        return n;
    }

    std::vector<Tensor*> params() {
        std::vector<Tensor*> out;
        for (auto& l : layers_)
            for (Tensor* p : l->params()) out.push_back(p);
        return out;
    }

    std::vector<const Tensor*> params() const {
        std::vector<const Tensor*> out;
        for (const auto& l : layers_)
            for (const Tensor* p : l->params()) out.push_back(p);
        return out;
    }

    std::vector<Tensor*> grads() {
        std::vector<Tensor*> out;
        for (auto& l : layers_)
            for (Tensor* g : l->grads()) out.push_back(g);
        return out;
    }

    std::size_t num_layers() const { return layers_.size(); }
    Layer& layer(std::size_t i) { return *layers_.at(i); }
    const Layer& layer(std::size_t i) const { return *layers_.at(i); }

    const std::string& kind() const { return kind_; }
    const std::vector<int>& structure() const { return structure_; }
    int kernel_size() const { return kernel_size_; }

private:
    std::string kind_;            // "cnn" or "dnn"
    std::vector<int> structure_;  // filter counts / layer widths
    int kernel_size_ = 0;         // 0 for dense networks
    std::vector<std::unique_ptr<Layer>> layers_;
};

// Draws every weight and bias i.i.d. from N(0,1) using a seeded generator.
// The same seed always produces bit-identical parameters.
void init_weights(Network& net, std::uint64_t seed);

}  // namespace eqnet
