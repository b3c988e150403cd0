#pragma once

#include <cstddef>
#include <vector>

#include "eqnet/network.hpp"
#include "eqnet/tensor.hpp"

namespace eqnet {

// Adam with bias-corrected first/second moments.
class Adam {
public:
    explicit Adam(double learning_rate = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                  double epsilon = 1e-8)
        : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

    // One update over a parameter list; moment accumulators are allocated to
    // match the parameter shapes on first use.
    void step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads);

    void step(Network& net) {
        std::vector<const Tensor*> gs;
        for (Tensor* g : net.grads()) gs.push_back(g);
        step(net.params(), gs);
    }

    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }
    std::size_t steps_taken() const { return t_; }

private:
    double lr_;
    double beta1_;
    double beta2_;
    double eps_;
    std::size_t t_ = 0;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
};

}  // namespace eqnet
