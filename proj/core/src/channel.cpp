#include "eqnet/channel.hpp"

#include <cmath>
#include <numbers>

#include "eqnet/errors.hpp"

namespace eqnet {

Nonlinearity nonlinearity_from_name(const std::string& name) {
    if (name == "identity" || name == "none") return Nonlinearity::identity;
    if (name == "poly_cos") return Nonlinearity::poly_cos;
    if (name == "cubic") return Nonlinearity::cubic;
    if (name == "poly_cos_abs") return Nonlinearity::poly_cos_abs;
    throw ConfigError("unknown nonlinearity: " + name);
}

std::string nonlinearity_name(Nonlinearity nl) {
    switch (nl) {
        case Nonlinearity::identity: return "identity";
        case Nonlinearity::poly_cos: return "poly_cos";
        case Nonlinearity::cubic: return "cubic";
        case Nonlinearity::poly_cos_abs: return "poly_cos_abs";
    }
    return "identity";
}

SnrConvention snr_convention_from_name(const std::string& name) {
    if (name == "es_n0") return SnrConvention::es_n0;
    if (name == "eb_n0") return SnrConvention::eb_n0;
    throw ConfigError("unknown snr convention: " + name);
}

std::string snr_convention_name(SnrConvention c) {
    return c == SnrConvention::es_n0 ? "es_n0" : "eb_n0";
}

double sigma_from_snr(const SnrPoint& point) {
    if (!std::isfinite(point.value_db)) throw NumericError("snr value must be finite");
    double linear = std::pow(10.0, point.value_db / 10.0);
    double variance;
    if (point.convention == SnrConvention::es_n0) {
        variance = 1.0 / (2.0 * linear);
    } else {
        if (!(point.code_rate > 0.0 && point.code_rate <= 1.0))
            throw ShapeError("code rate must be in (0,1]");
        variance = 1.0 / (2.0 * point.code_rate * linear);
    }
    return std::sqrt(variance);
}

std::vector<double> bpsk_modulate(const std::vector<int>& bits) {
    std::vector<double> symbols(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) throw ShapeError("bpsk input must be 0/1");
        symbols[i] = bits[i] == 0 ? 1.0 : -1.0;
    }
    return symbols;
}

std::vector<int> bpsk_demodulate(const std::vector<double>& symbols) {
    std::vector<int> bits(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) bits[i] = symbols[i] >= 0.0 ? 0 : 1;
    return bits;
}

std::vector<double> fir_convolve(const std::vector<double>& symbols,
                                 const std::vector<double>& taps) {
    if (taps.empty()) throw ShapeError("fir taps must not be empty");
    std::size_t n = symbols.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        std::size_t kmax = std::min(taps.size(), i + 1);
        for (std::size_t k = 0; k < kmax; ++k) acc += taps[k] * symbols[i - k];
        out[i] = acc;
    }
    return out;
}

double apply_nonlinearity(double v, Nonlinearity nl) {
    switch (nl) {
        case Nonlinearity::identity:
            return v;
        case Nonlinearity::poly_cos:
            return v + 0.2 * v * v - 0.1 * v * v * v + 0.5 * std::cos(std::numbers::pi * v);
        case Nonlinearity::cubic:
            return v - 0.9 * v * v * v;
        case Nonlinearity::poly_cos_abs: {
            double a = std::fabs(v);
            double m = a + 0.2 * a * a - 0.1 * a * a * a + 0.5 * std::cos(std::numbers::pi * a);
            return v < 0.0 ? -m : m;
        }
    }
    return v;
}

std::vector<double> apply_nonlinearity(const std::vector<double>& v, Nonlinearity nl) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw NumericError("nonlinearity input must be finite");
        out[i] = apply_nonlinearity(v[i], nl);
    }
    return out;
}

std::vector<double> transmit(const std::vector<int>& bits, const ChannelSpec& spec,
                             std::mt19937_64& rng) {
    if (spec.noise_sigma < 0.0) throw ShapeError("noise sigma must be >= 0");
    std::vector<double> r =
        apply_nonlinearity(fir_convolve(bpsk_modulate(bits), spec.taps), spec.nonlinearity);
    if (spec.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (double& v : r) v += noise(rng);
    }
    return r;
}

}  // namespace eqnet
