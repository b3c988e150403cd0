#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eqnet/channel.hpp"
#include "eqnet/models.hpp"
#include "eqnet/polar.hpp"

namespace eqnet {

struct BerRecord {
    double snr_db = 0.0;
    SnrConvention convention = SnrConvention::es_n0;
    long long bits_tested = 0;
    long long bit_errors = 0;
    double ber = 0.0;
    double wilson95_halfwidth = 0.0;
};

// Half-width of the 95% Wilson score interval.
double wilson95_halfwidth(long long errors, long long trials);

BerRecord make_ber_record(double snr_db, SnrConvention conv, long long bits, long long errors);

// One frame of a Monte-Carlo run. Receives the frame data and three
// dedicated generator streams so that paired comparisons across systems
// see identical transmissions. Returns the number of bit errors.
struct FrameContext {
    const std::vector<int>& message;
    const std::vector<int>& codeword;
    const std::vector<double>& symbols;   // transmitted, +/-1
    const std::vector<double>& received;
    double sigma;
    std::mt19937_64& system_rng;          // for per-frame system randomness (pilots)
};

struct MonteCarloSystem {
    std::string name;
    int bits_per_frame;  // 16 coded symbols or 8 info bits
    std::function<long long(const FrameContext&)> count_errors;
};

struct EvalOptions {
    long long frames_per_snr = 50000;
    std::uint64_t seed = 1;
    int threads = 1;
    bool coded_frames = true;  // false: i.i.d. random bits, no encoder
};

// Frame-parallel Monte-Carlo BER. Per-frame generator streams are derived
// from (seed, snr index, frame index), so totals do not depend on the
// worker count.
std::vector<BerRecord> evaluate_ber(const MonteCarloSystem& system, const ChannelSpec& channel,
                                    const PolarCode& code, const std::vector<double>& snr_grid_db,
                                    SnrConvention convention, double code_rate,
                                    const EvalOptions& options);

// Built-in systems.
MonteCarloSystem cnn_equalizer_system(const Network& cnn);
MonteCarloSystem cnn_nnd_system(const Network& cnn, const Network& nnd);
MonteCarloSystem cnn_sc_system(const Network& cnn, const PolarCode& code);
// Perfect-CSI MAP equalizer; hard decisions on the symbol posteriors.
MonteCarloSystem bcjr_system(const ChannelSpec& channel);
// Estimated CSI: a fresh pilot of the given length per frame, LS taps,
// trellis rebuilt from the estimate.
MonteCarloSystem bcjr_estimated_system(const ChannelSpec& channel, int pilot_length);

// Classical baseline sweep (perfect CSI when pilot_length == 0).
std::vector<BerRecord> map_ber_baseline(const ChannelSpec& channel, const PolarCode& code,
                                        const std::vector<double>& snr_grid_db,
                                        SnrConvention convention, double code_rate,
                                        int pilot_length, const EvalOptions& options);

// Uncoded BPSK with a sign detector; harness calibration against the
// analytic Q-function.
BerRecord uncoded_bpsk_ber(const ChannelSpec& channel, double snr_db, SnrConvention convention,
                           long long total_bits, std::uint64_t seed, int threads);

// Q(sqrt(2 Es/N0)); exact AWGN BPSK error rate.
double qfunc(double x);
double bpsk_awgn_ber(double es_n0_db);

}  // namespace eqnet
