#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqnet/channel.hpp"
#include "eqnet/network.hpp"
#include "eqnet/polar.hpp"

namespace eqnet {

struct NetworkSpec {
    enum class Kind { cnn, dnn };
    Kind kind = Kind::cnn;
    std::vector<int> layer_sizes;  // filter counts (cnn) or widths (dnn)
    int kernel_size = 3;           // cnn only, odd

    static NetworkSpec cnn(std::vector<int> filters, int kernel = 3) {
        return {Kind::cnn, std::move(filters), kernel};
    }
    static NetworkSpec dnn(std::vector<int> widths) { return {Kind::dnn, std::move(widths), 0}; }
};

struct TrainingConfig {
    std::vector<double> snr_grid_db = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    int frames_per_snr = 20;   // per mini-batch
    int iterations = 5000;
    double learning_rate = 1e-3;
    std::uint64_t seed = 1;
    int frame_info_bits = 8;
    SnrConvention convention = SnrConvention::es_n0;
    double code_rate = 0.5;

    int batch_size() const { return frames_per_snr * static_cast<int>(snr_grid_db.size()); }
};

// Conv chain, one input channel, ReLU on all but the last layer.
Network build_cnn_equalizer(const NetworkSpec& spec);

// Dense chain, ReLU on hidden layers, sigmoid on the output.
Network build_nnd(const NetworkSpec& spec);

struct TrainResult {
    std::vector<double> loss_trace;  // one entry per iteration
    // Filled by joint_finetune only: the two addends of the total loss.
    std::vector<double> mse_trace;
    std::vector<double> bce_trace;
    double final_loss() const { return loss_trace.empty() ? 0.0 : loss_trace.back(); }
};

// Equalizer training: every iteration draws a fresh mini-batch of coded
// frames (random message -> polar encode -> BPSK -> channel, one group per
// grid SNR) and minimizes the MSE between the network output and the
// transmitted symbols.
TrainResult train_cnn_equalizer(Network& cnn, const TrainingConfig& config,
                                const ChannelSpec& channel, const PolarCode& code);

// Decoder training over an AWGN-only channel: input is the raw received
// codeword, target the message bits, loss BCE.
TrainResult train_nnd_awgn(Network& nnd, const TrainingConfig& config, const PolarCode& code);

struct JointOptions {
    int iterations = 2000;
    double learning_rate = 5e-4;
    bool freeze_cnn = false;
};

// End-to-end fine-tuning of channel -> CNN -> NND under the summed loss
// MSE(equalized, symbols) + BCE(decoded, message).
TrainResult joint_finetune(Network& cnn, Network& nnd, const JointOptions& options,
                           const TrainingConfig& config, const ChannelSpec& channel,
                           const PolarCode& code);

// Forward pass over a received sequence of any length.
std::vector<double> equalize(const Network& cnn, const std::vector<double>& received);

// Equalize and count activations, for complexity measurements.
std::vector<double> equalize_with_stats(const Network& cnn, const std::vector<double>& received,
                                        std::size_t* activation_doubles);

// Threshold the sigmoid outputs at 0.5; an exact 0.5 resolves to bit 1.
std::vector<int> decode_nnd(const Network& nnd, const std::vector<double>& soft);

// Checkpoint round-trip through the versioned text format.
void save_model(const Network& net, const std::string& path);
Network load_model(const std::string& path);

}  // namespace eqnet
