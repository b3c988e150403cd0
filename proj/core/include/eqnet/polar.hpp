#pragma once

#include <vector>

namespace eqnet {

// Polar code over the 2x2 kernel [[1,0],[1,1]], natural order, no
// bit-reversal permutation. Frozen positions carry zeros.
struct PolarCode {
    int block_length = 16;       // N, power of two
    int info_length = 8;         // K
    std::vector<int> info_set;   // sorted, K indices in [0,N)

    // Bhattacharyya-parameter construction: z <- {2z - z^2, z^2} starting
    // from z0, K indices with the smallest z win, ties toward the larger
    // index.
    static PolarCode construct(int block_length, int info_length, double design_param = 0.5);

    bool is_info(int i) const;
};

// In-place butterfly x = u F^{(x) log2 N} over GF(2); self-inverse.
std::vector<int> polar_transform(std::vector<int> u);

std::vector<int> polar_encode(const PolarCode& code, const std::vector<int>& message);

// Successive cancellation with exact tanh-domain f/g updates.
// LLR convention: positive means bit 0 is more likely.
std::vector<int> sc_decode(const PolarCode& code, const std::vector<double>& llrs);

}  // namespace eqnet
