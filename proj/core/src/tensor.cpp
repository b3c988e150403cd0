#include "eqnet/tensor.hpp"

#include <cmath>

namespace eqnet {

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void require_finite(const Tensor& t, const char* where) {
    if (!t.all_finite()) throw NumericError(std::string("non-finite values in ") + where);
}

}  // namespace eqnet
