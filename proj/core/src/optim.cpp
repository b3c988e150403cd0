#include "eqnet/optim.hpp"

#include <cmath>

#include "eqnet/errors.hpp"

namespace eqnet {

void Adam::step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads) {
    if (params.size() != grads.size()) throw ShapeError("adam: parameter/gradient count mismatch");
    if (m_.empty()) {
        for (const Tensor* p : params) {
            m_.emplace_back(p->shape());
            v_.emplace_back(p->shape());
        }
    }
    if (m_.size() != params.size()) throw ShapeError("adam: state size mismatch");

    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));

    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const Tensor& g = *grads[i];
        if (!p.same_shape(g) || !p.same_shape(m_[i]))
            throw ShapeError("adam: shape mismatch");
        double* pd = p.data();
        const double* gd = g.data();
        double* md = m_[i].data();
        double* vd = v_[i].data();
        for (std::size_t j = 0; j < p.size(); ++j) {
            md[j] = beta1_ * md[j] + (1.0 - beta1_) * gd[j];
            vd[j] = beta2_ * vd[j] + (1.0 - beta2_) * gd[j] * gd[j];
            double mhat = md[j] / bc1;
            double vhat = vd[j] / bc2;
            pd[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

}  // namespace eqnet
