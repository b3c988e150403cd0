#include "eqnet/models.hpp"

#include <cmath>
#include <random>

#include "eqnet/checkpoint.hpp"
#include "eqnet/errors.hpp"
#include "eqnet/losses.hpp"
#include "eqnet/optim.hpp"
#include "eqnet/rng.hpp"

namespace eqnet {

namespace {

// Data streams hanging off the training seed.
enum : std::uint64_t { kStreamMessage = 0, kStreamNoise = 1 };

std::vector<int> random_bits(int count, std::mt19937_64& rng) {
    std::vector<int> bits(count);
    for (int i = 0; i < count; ++i) bits[i] = static_cast<int>(rng() & 1u);
    return bits;
}

struct Batch {
    Tensor input;    // [B,1,N] for cnn, [B,N] for dnn
    Tensor symbols;  // [B,1,N]
    Tensor message;  // [B,K]
};

// One mini-batch: frames_per_snr coded frames at every grid SNR.
Batch make_batch(const TrainingConfig& cfg, const ChannelSpec& channel, const PolarCode& code,
                 std::mt19937_64& msg_rng, std::mt19937_64& noise_rng, bool conv_shape) {
    std::size_t batch = static_cast<std::size_t>(cfg.batch_size());
    std::size_t n = static_cast<std::size_t>(code.block_length);
    std::size_t k = static_cast<std::size_t>(code.info_length);

    Batch out{conv_shape ? Tensor({batch, 1, n}) : Tensor({batch, n}),
              Tensor({batch, 1, n}), Tensor({batch, k})};

    std::size_t row = 0;
    for (double snr_db : cfg.snr_grid_db) {
        ChannelSpec spec = channel;
        spec.noise_sigma = sigma_from_snr({snr_db, cfg.convention, cfg.code_rate});
        for (int f = 0; f < cfg.frames_per_snr; ++f, ++row) {
            std::vector<int> message = random_bits(static_cast<int>(k), msg_rng);
            std::vector<int> codeword = polar_encode(code, message);
            std::vector<double> symbols = bpsk_modulate(codeword);
            std::vector<double> received = transmit(codeword, spec, noise_rng);
            for (std::size_t j = 0; j < n; ++j) {
                out.input.data()[row * n + j] = received[j];
                out.symbols.data()[row * n + j] = symbols[j];
            }
            for (std::size_t j = 0; j < k; ++j)
                out.message.data()[row * k + j] = static_cast<double>(message[j]);
        }
    }
    return out;
}

void check_loss_finite(double loss, int iteration) {
    if (!std::isfinite(loss))
        throw TrainingError("training loss diverged", static_cast<std::size_t>(iteration));
}

}  // namespace

Network build_cnn_equalizer(const NetworkSpec& spec) {
    if (spec.kind != NetworkSpec::Kind::cnn) throw ShapeError("expected a cnn spec");
    if (spec.layer_sizes.empty() || spec.layer_sizes.back() != 1)
        throw ShapeError("cnn equalizer must end in a single filter");
    for (int m : spec.layer_sizes)
        if (m < 1) throw ShapeError("cnn filter counts must be >= 1");

    Network net("cnn", spec.layer_sizes, spec.kernel_size);
    int in_channels = 1;
    for (std::size_t i = 0; i < spec.layer_sizes.size(); ++i) {
        bool last = i + 1 == spec.layer_sizes.size();
        net.add_layer(std::make_unique<ConvLayer>(in_channels, spec.layer_sizes[i],
                                                  spec.kernel_size, !last));
        in_channels = spec.layer_sizes[i];
    }
    return net;
}

Network build_nnd(const NetworkSpec& spec) {
    if (spec.kind != NetworkSpec::Kind::dnn) throw ShapeError("expected a dnn spec");
    if (spec.layer_sizes.size() < 2) throw ShapeError("dnn needs input and output widths");
    for (int h : spec.layer_sizes)
        if (h < 1) throw ShapeError("dnn widths must be >= 1");

    Network net("dnn", spec.layer_sizes, 0);
    for (std::size_t i = 0; i + 1 < spec.layer_sizes.size(); ++i) {
        bool last = i + 2 == spec.layer_sizes.size();
        net.add_layer(std::make_unique<DenseLayer>(
            spec.layer_sizes[i], spec.layer_sizes[i + 1],
            last ? Activation::sigmoid : Activation::relu));
    }
    return net;
}

TrainResult train_cnn_equalizer(Network& cnn, const TrainingConfig& config,
                                const ChannelSpec& channel, const PolarCode& code) {
    TrainResult result;
    result.loss_trace.reserve(config.iterations);
    Adam opt(config.learning_rate);
    std::mt19937_64 msg_rng = make_stream_rng(config.seed, kStreamMessage);
    std::mt19937_64 noise_rng = make_stream_rng(config.seed, kStreamNoise);

    for (int it = 0; it < config.iterations; ++it) {
        Batch batch = make_batch(config, channel, code, msg_rng, noise_rng, true);
        cnn.zero_grad();
        Tensor pred = cnn.forward(batch.input);
        LossValue loss = mse_loss(pred, batch.symbols);
        check_loss_finite(loss.value, it);
        cnn.backward(loss.grad);
        opt.step(cnn);
        result.loss_trace.push_back(loss.value);
    }
    return result;
}

TrainResult train_nnd_awgn(Network& nnd, const TrainingConfig& config, const PolarCode& code) {
    TrainResult result;
    result.loss_trace.reserve(config.iterations);
    Adam opt(config.learning_rate);
    std::mt19937_64 msg_rng = make_stream_rng(config.seed, kStreamMessage);
    std::mt19937_64 noise_rng = make_stream_rng(config.seed, kStreamNoise);
    ChannelSpec awgn;  // identity taps, no distortion

    for (int it = 0; it < config.iterations; ++it) {
        Batch batch = make_batch(config, awgn, code, msg_rng, noise_rng, false);
        nnd.zero_grad();
        Tensor pred = nnd.forward(batch.input);
        LossValue loss = bce_loss(pred, batch.message);
        check_loss_finite(loss.value, it);
        nnd.backward(loss.grad);
        opt.step(nnd);
        result.loss_trace.push_back(loss.value);
    }
    return result;
}

TrainResult joint_finetune(Network& cnn, Network& nnd, const JointOptions& options,
                           const TrainingConfig& config, const ChannelSpec& channel,
                           const PolarCode& code) {
    TrainResult result;
    result.loss_trace.reserve(options.iterations);
    Adam cnn_opt(options.learning_rate);
    Adam nnd_opt(options.learning_rate);
    std::mt19937_64 msg_rng = make_stream_rng(config.seed, kStreamMessage);
    std::mt19937_64 noise_rng = make_stream_rng(config.seed, kStreamNoise);

    std::size_t batch_size = static_cast<std::size_t>(config.batch_size());
    std::size_t n = static_cast<std::size_t>(code.block_length);

    for (int it = 0; it < options.iterations; ++it) {
        Batch batch = make_batch(config, channel, code, msg_rng, noise_rng, true);
        cnn.zero_grad();
        nnd.zero_grad();

        Tensor equalized = cnn.forward(batch.input);          // [B,1,N]
        Tensor nnd_in = equalized.reshaped({batch_size, n});  // same data
        Tensor decoded = nnd.forward(nnd_in);                 // [B,K]

        LossValue eq_loss = mse_loss(equalized, batch.symbols);
        LossValue dec_loss = bce_loss(decoded, batch.message);
        double total = eq_loss.value + dec_loss.value;
        check_loss_finite(total, it);

        Tensor g_nnd_in = nnd.backward(dec_loss.grad);  // [B,N]
        Tensor g_equalized = eq_loss.grad;              // [B,1,N]
        for (std::size_t i = 0; i < g_equalized.size(); ++i)
            g_equalized[i] += g_nnd_in[i];
        cnn.backward(g_equalized);

        if (!options.freeze_cnn) cnn_opt.step(cnn);
        nnd_opt.step(nnd);
        result.loss_trace.push_back(total);
        result.mse_trace.push_back(eq_loss.value);
        result.bce_trace.push_back(dec_loss.value);
    }
    return result;
}

std::vector<double> equalize(const Network& cnn, const std::vector<double>& received) {
    Tensor in({1, received.size()}, received);
    Tensor out = cnn.infer(in);
    return out.values();
}

std::vector<double> equalize_with_stats(const Network& cnn, const std::vector<double>& received,
                                        std::size_t* activation_doubles) {
    Tensor x({1, received.size()}, received);
    std::size_t total = x.size();
    for (std::size_t i = 0; i < cnn.num_layers(); ++i) {
        x = cnn.layer(i).infer(x);
        total += x.size();
    }
    if (activation_doubles) *activation_doubles = total;
    return x.values();
}

std::vector<int> decode_nnd(const Network& nnd, const std::vector<double>& soft) {
    Tensor out = nnd.infer(Tensor::from_vector(soft));
    std::vector<int> bits(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) bits[i] = out[i] >= 0.5 ? 1 : 0;
    return bits;
}

void save_model(const Network& net, const std::string& path) { save_checkpoint(net, path); }

Network load_model(const std::string& path) {
    CheckpointHeader h = read_checkpoint_header(path);
    Network net;
    if (h.kind == "cnn")
        net = build_cnn_equalizer(NetworkSpec::cnn(h.structure, h.kernel_size));
    else if (h.kind == "dnn")
        net = build_nnd(NetworkSpec::dnn(h.structure));
    else
        throw IoError("unknown network kind in checkpoint: " + h.kind);
    load_checkpoint_into(net, path);
    return net;
}

}  // namespace eqnet
