#include "eqnet/network.hpp"

#include <random>

namespace eqnet {

void init_weights(Network& net, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> standard_normal(0.0, 1.0);
    for (Tensor* p : net.params()) {
        double* d = p->data();
        for (std::size_t i = 0; i < p->size(); ++i) d[i] = standard_normal(rng);
    }
}

}  // namespace eqnet
