#include "eqnet/polar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eqnet/errors.hpp"

namespace eqnet {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Exact, numerically stable tanh-domain check-node update.
double llr_f(double a, double b) {
    double sign = (a < 0.0) != (b < 0.0) ? -1.0 : 1.0;
    double aa = std::fabs(a);
    double ab = std::fabs(b);
    double lo = std::min(aa, ab);
    return sign * lo + std::log1p(std::exp(-(aa + ab))) - std::log1p(std::exp(-std::fabs(aa - ab)));
}

double llr_g(double a, double b, int u) { return b + (u ? -a : a); }

struct ScDecoder {
    const PolarCode& code;
    std::vector<int> message;

    // Returns the re-encoded codeword bits of this subtree; offset tracks
    // the absolute u-index for frozen lookups.
    std::vector<int> decode(const std::vector<double>& llr, int offset) {
        std::size_t len = llr.size();
        if (len == 1) {
            int bit;
            if (code.is_info(offset)) {
                bit = llr[0] >= 0.0 ? 0 : 1;
                message.push_back(bit);
            } else {
                bit = 0;
            }
            return {bit};
        }
        std::size_t half = len / 2;
        std::vector<double> sub(half);
        for (std::size_t i = 0; i < half; ++i) sub[i] = llr_f(llr[i], llr[i + half]);
        std::vector<int> left = decode(sub, offset);
        for (std::size_t i = 0; i < half; ++i) sub[i] = llr_g(llr[i], llr[i + half], left[i]);
        std::vector<int> right = decode(sub, offset + static_cast<int>(half));
        std::vector<int> enc(len);
        for (std::size_t i = 0; i < half; ++i) {
            enc[i] = left[i] ^ right[i];
            enc[i + half] = right[i];
        }
        return enc;
    }
};

}  // namespace

PolarCode PolarCode::construct(int block_length, int info_length, double design_param) {
    if (!is_power_of_two(block_length)) throw ShapeError("polar block length must be a power of 2");
    if (info_length < 1 || info_length > block_length)
        throw ShapeError("polar info length out of range");

    // Natural-order doubling: index bits MSB-first select the minus/plus
    // branch of the recursion.
    std::vector<double> z{design_param};
    while (static_cast<int>(z.size()) < block_length) {
        std::vector<double> next(z.size() * 2);
        for (std::size_t i = 0; i < z.size(); ++i) {
            next[2 * i] = 2.0 * z[i] - z[i] * z[i];
            next[2 * i + 1] = z[i] * z[i];
        }
        z = std::move(next);
    }

    std::vector<int> order(block_length);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (z[a] != z[b]) return z[a] < z[b];
        return a > b;  // ties toward the larger index
    });

    PolarCode code;
    code.block_length = block_length;
    code.info_length = info_length;
    code.info_set.assign(order.begin(), order.begin() + info_length);
    std::sort(code.info_set.begin(), code.info_set.end());
    return code;
}

bool PolarCode::is_info(int i) const {
    return std::binary_search(info_set.begin(), info_set.end(), i);
}

std::vector<int> polar_transform(std::vector<int> u) {
    std::size_t n = u.size();
    if (!is_power_of_two(static_cast<int>(n))) throw ShapeError("transform length must be 2^m");
    for (std::size_t half = 1; half < n; half <<= 1)
        for (std::size_t block = 0; block < n; block += 2 * half)
            for (std::size_t j = block; j < block + half; ++j) u[j] ^= u[j + half];
    return u;
}

std::vector<int> polar_encode(const PolarCode& code, const std::vector<int>& message) {
    if (static_cast<int>(message.size()) != code.info_length)
        throw ShapeError("polar message length mismatch");
    std::vector<int> u(code.block_length, 0);
    for (int i = 0; i < code.info_length; ++i) {
        int bit = message[i];
        if (bit != 0 && bit != 1) throw ShapeError("polar message bits must be 0/1");
        u[code.info_set[i]] = bit;
    }
    return polar_transform(std::move(u));
}

std::vector<int> sc_decode(const PolarCode& code, const std::vector<double>& llrs) {
    if (static_cast<int>(llrs.size()) != code.block_length)
        throw ShapeError("sc_decode llr length mismatch");
    for (double v : llrs)
        if (!std::isfinite(v)) throw NumericError("sc_decode requires finite llrs");
    ScDecoder dec{code, {}};
    dec.message.reserve(code.info_length);
    dec.decode(llrs, 0);
    return dec.message;
}

}  // namespace eqnet
