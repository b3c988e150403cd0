#pragma once

#include <cstddef>
#include <vector>

#include "eqnet/errors.hpp"

namespace eqnet {

// Dense row-major real array, rank 1-3. Carrier for activations, weights
// and gradients.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape)
        : shape_(std::move(shape)), data_(checked_numel(shape_), 0.0) {}

    Tensor(std::vector<std::size_t> shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (checked_numel(shape_) != data_.size())
            throw ShapeError("tensor data size does not match shape");
    }

    static Tensor from_vector(std::vector<double> v) {
        std::size_t n = v.size();
        return Tensor({n}, std::move(v));
    }

    std::size_t rank() const { return shape_.size(); }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t dim(std::size_t i) const { return shape_.at(i); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    double& at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    // Same storage, new shape. Element count must match.
    Tensor reshaped(std::vector<std::size_t> shape) const {
        if (checked_numel(shape) != data_.size())
            throw ShapeError("reshape changes element count");
        return Tensor(std::move(shape), data_);
    }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool all_finite() const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

private:
    static std::size_t checked_numel(const std::vector<std::size_t>& shape) {
        if (shape.empty() || shape.size() > 3)
            throw ShapeError("tensor rank must be 1-3");
        std::size_t n = 1;
        for (std::size_t d : shape) {
            if (d == 0) throw ShapeError("tensor extent must be positive");
            n *= d;
        }
        return n;
    }

    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

void require_finite(const Tensor& t, const char* where);

}  // namespace eqnet
