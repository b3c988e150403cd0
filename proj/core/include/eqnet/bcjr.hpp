#pragma once

#include <vector>

#include "eqnet/channel.hpp"

namespace eqnet {

// ISI trellis over BPSK symbols. A state encodes the previous L-1 symbols
// (bit j of the index: 0 -> +1, 1 -> -1 for symbol s_{t-1-j}). The first
// L-1 steps use the channel's zero initial state, so early branch outputs
// are time-dependent.
class Trellis {
public:
    Trellis(std::vector<double> taps, Nonlinearity nonlinearity);

    int memory() const { return memory_; }
    int num_states() const { return 1 << memory_; }

    // Noiseless output for (time, state, input symbol +1/-1).
    double branch_output(int t, unsigned state, int input_sym) const;

    unsigned next_state(unsigned state, int input_sym) const {
        unsigned bit = input_sym < 0 ? 1u : 0u;
        return ((state << 1) | bit) & state_mask_;
    }

    static int symbol_from_bit(unsigned bit) { return bit ? -1 : +1; }

private:
    std::vector<double> taps_;
    Nonlinearity nonlinearity_;
    int memory_;
    unsigned state_mask_;
    std::vector<double> steady_output_;  // [state][input-bit] for t >= L-1
};

// Forward-backward posterior equalization: returns P(s_i = +1 | r) per
// position. Per-step normalized recursions in the linear domain; the
// initial state is the all-zeros channel history, the final state is free.
std::vector<double> bcjr_equalize(const Trellis& trellis, const std::vector<double>& received,
                                  double sigma);

}  // namespace eqnet
