#include "eqnet/bcjr.hpp"

#include <algorithm>
#include <cmath>

#include "eqnet/errors.hpp"

namespace eqnet {

Trellis::Trellis(std::vector<double> taps, Nonlinearity nonlinearity)
    : taps_(std::move(taps)), nonlinearity_(nonlinearity) {
    if (taps_.empty()) throw ShapeError("trellis taps must not be empty");
    for (double t : taps_)
        if (!std::isfinite(t)) throw NumericError("trellis taps must be finite");
    memory_ = static_cast<int>(taps_.size()) - 1;
    state_mask_ = (1u << memory_) - 1u;

    steady_output_.resize(static_cast<std::size_t>(num_states()) * 2);
    for (unsigned s = 0; s < static_cast<unsigned>(num_states()); ++s) {
        for (unsigned abit = 0; abit < 2; ++abit) {
            double lin = taps_[0] * symbol_from_bit(abit);
            for (int j = 0; j < memory_; ++j)
                lin += taps_[j + 1] * symbol_from_bit((s >> j) & 1u);
            steady_output_[s * 2 + abit] = apply_nonlinearity(lin, nonlinearity_);
        }
    }
}

double Trellis::branch_output(int t, unsigned state, int input_sym) const {
    unsigned abit = input_sym < 0 ? 1u : 0u;
    if (t >= memory_) return steady_output_[state * 2 + abit];
    // Warmup: symbols before the frame are zero.
    double lin = taps_[0] * input_sym;
    for (int j = 0; j < memory_ && j < t; ++j)
        lin += taps_[j + 1] * symbol_from_bit((state >> j) & 1u);
    return apply_nonlinearity(lin, nonlinearity_);
}

std::vector<double> bcjr_equalize(const Trellis& trellis, const std::vector<double>& received,
                                  double sigma) {
    if (sigma <= 0.0) throw ShapeError("bcjr requires sigma > 0");
    std::size_t n = received.size();
    int ns = trellis.num_states();
    double inv2s2 = 1.0 / (2.0 * sigma * sigma);

    // Branch weights exp(-(r - mu)^2 / 2 sigma^2), normalized per step by
    // the largest exponent to keep the linear-domain recursions in range.
    std::vector<double> gamma(n * ns * 2);
    for (std::size_t t = 0; t < n; ++t) {
        double emax = -1e300;
        for (int s = 0; s < ns; ++s) {
            for (int a = 0; a < 2; ++a) {
                double mu = trellis.branch_output(static_cast<int>(t), s,
                                                  Trellis::symbol_from_bit(a));
                double d = received[t] - mu;
                double e = -d * d * inv2s2;
                gamma[(t * ns + s) * 2 + a] = e;
                emax = std::max(emax, e);
            }
        }
        for (int s = 0; s < ns; ++s)
            for (int a = 0; a < 2; ++a) {
                double& g = gamma[(t * ns + s) * 2 + a];
                g = std::exp(g - emax);
            }
    }

    // Forward, scaled to sum 1 per step. Mass starts in state 0; early
    // branch outputs mask the not-yet-transmitted history, so state 0 is
    // the all-zeros channel history.
    std::vector<double> alpha((n + 1) * ns, 0.0);
    alpha[0] = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
        double sum = 0.0;
        for (int s = 0; s < ns; ++s) {
            double a0 = alpha[t * ns + s];
            if (a0 == 0.0) continue;
            for (int a = 0; a < 2; ++a) {
                unsigned nxt = trellis.next_state(static_cast<unsigned>(s),
                                                  Trellis::symbol_from_bit(a));
                double w = a0 * gamma[(t * ns + s) * 2 + a];
                alpha[(t + 1) * ns + nxt] += w;
                sum += w;
            }
        }
        if (sum <= 0.0) throw NumericError("bcjr forward recursion vanished");
        for (int s = 0; s < ns; ++s) alpha[(t + 1) * ns + s] /= sum;
    }

    // Backward with a free final state.
    std::vector<double> beta((n + 1) * ns, 0.0);
    for (int s = 0; s < ns; ++s) beta[n * ns + s] = 1.0;
    for (std::size_t ti = n; ti-- > 0;) {
        double sum = 0.0;
        for (int s = 0; s < ns; ++s) {
            double acc = 0.0;
            for (int a = 0; a < 2; ++a) {
                unsigned nxt = trellis.next_state(static_cast<unsigned>(s),
                                                  Trellis::symbol_from_bit(a));
                acc += gamma[(ti * ns + s) * 2 + a] * beta[(ti + 1) * ns + nxt];
            }
            beta[ti * ns + s] = acc;
            sum += acc;
        }
        if (sum <= 0.0) throw NumericError("bcjr backward recursion vanished");
        for (int s = 0; s < ns; ++s) beta[ti * ns + s] /= sum;
    }

    std::vector<double> posterior(n);
    for (std::size_t t = 0; t < n; ++t) {
        double plus = 0.0;
        double minus = 0.0;
        for (int s = 0; s < ns; ++s) {
            double a0 = alpha[t * ns + s];
            if (a0 == 0.0) continue;
            for (int a = 0; a < 2; ++a) {
                unsigned nxt = trellis.next_state(static_cast<unsigned>(s),
                                                  Trellis::symbol_from_bit(a));
                double w = a0 * gamma[(t * ns + s) * 2 + a] * beta[(t + 1) * ns + nxt];
                if (a == 0)
                    plus += w;
                else
                    minus += w;
            }
        }
        double denom = plus + minus;
        if (denom <= 0.0) throw NumericError("bcjr posterior vanished");
        posterior[t] = plus / denom;
    }
    return posterior;
}

}  // namespace eqnet
