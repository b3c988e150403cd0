#pragma once

#include <random>
#include <string>
#include <vector>

#include "eqnet/errors.hpp"

namespace eqnet {

// Memoryless distortion applied after the FIR filter.
//   identity:     g(v) = v
//   poly_cos:     g(v) = v + 0.2 v^2 - 0.1 v^3 + 0.5 cos(pi v)
//   cubic:        g(v) = v - 0.9 v^3
//   poly_cos_abs: g(v) = sgn(v) (|v| + 0.2|v|^2 - 0.1|v|^3 + 0.5 cos(pi|v|))
// poly_cos_abs mirrors poly_cos around the origin; it is kept for
// comparison and is never the default.
enum class Nonlinearity { identity, poly_cos, cubic, poly_cos_abs };

Nonlinearity nonlinearity_from_name(const std::string& name);
std::string nonlinearity_name(Nonlinearity nl);

// Dispersive channel: r = g(h (x) s) + n, n ~ N(0, sigma^2) i.i.d.
struct ChannelSpec {
    std::vector<double> taps{1.0};
    Nonlinearity nonlinearity = Nonlinearity::identity;
    double noise_sigma = 0.0;
};

// The length-3 unit-norm dispersive test channel used throughout the
// experiments.
inline std::vector<double> dispersive_test_taps() { return {0.3482, 0.8704, 0.3482}; }

enum class SnrConvention { es_n0, eb_n0 };

SnrConvention snr_convention_from_name(const std::string& name);
std::string snr_convention_name(SnrConvention c);

struct SnrPoint {
    double value_db = 0.0;
    SnrConvention convention = SnrConvention::es_n0;
    double code_rate = 1.0;  // only used by eb_n0
};

// Per-sample noise standard deviation for unit-energy BPSK:
//   es_n0: sigma^2 = 1 / (2 * 10^(dB/10))
//   eb_n0: sigma^2 = 1 / (2 * R * 10^(dB/10))
double sigma_from_snr(const SnrPoint& point);

// bit 0 -> +1, bit 1 -> -1
std::vector<double> bpsk_modulate(const std::vector<int>& bits);
std::vector<int> bpsk_demodulate(const std::vector<double>& symbols);

// Causal convolution with zero initial state, truncated to the input
// length: v_i = sum_k h_k s_{i-k}, s_j = 0 for j < 0.
std::vector<double> fir_convolve(const std::vector<double>& symbols,
                                 const std::vector<double>& taps);

double apply_nonlinearity(double v, Nonlinearity nl);
std::vector<double> apply_nonlinearity(const std::vector<double>& v, Nonlinearity nl);

// Full channel pass: modulate, filter, distort, add noise.
std::vector<double> transmit(const std::vector<int>& bits, const ChannelSpec& spec,
                             std::mt19937_64& rng);

}  // namespace eqnet
