#include "eqnet/ber.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "eqnet/bcjr.hpp"
#include "eqnet/channel_estimate.hpp"
#include "eqnet/errors.hpp"
#include "eqnet/rng.hpp"

namespace eqnet {

namespace {

enum : std::uint64_t { kStreamMessage = 0, kStreamNoise = 1, kStreamSystem = 2 };

long long count_mismatches(const std::vector<int>& a, const std::vector<int>& b) {
    long long errors = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++errors;
    return errors;
}

template <typename Fn>
void parallel_frames(long long frames, int threads, Fn&& per_frame_errors,
                     long long* total_errors) {
    int workers = std::max(1, threads);
    if (workers == 1) {
        long long errs = 0;
        for (long long f = 0; f < frames; ++f) errs += per_frame_errors(f);
        *total_errors = errs;
        return;
    }
    std::vector<long long> partial(workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            long long errs = 0;
            for (long long f = w; f < frames; f += workers) errs += per_frame_errors(f);
            partial[w] = errs;
        });
    }
    for (auto& t : pool) t.join();
    long long errs = 0;
    for (long long p : partial) errs += p;
    *total_errors = errs;
}

}  // namespace

double wilson95_halfwidth(long long errors, long long trials) {
    if (trials <= 0) return 0.0;
    const double z = 1.959963984540054;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(errors) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return half;
}

BerRecord make_ber_record(double snr_db, SnrConvention conv, long long bits, long long errors) {
    BerRecord rec;
    rec.snr_db = snr_db;
    rec.convention = conv;
    rec.bits_tested = bits;
    rec.bit_errors = errors;
    rec.ber = bits > 0 ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
    rec.wilson95_halfwidth = wilson95_halfwidth(errors, bits);
    return rec;
}

std::vector<BerRecord> evaluate_ber(const MonteCarloSystem& system, const ChannelSpec& channel,
                                    const PolarCode& code, const std::vector<double>& snr_grid_db,
                                    SnrConvention convention, double code_rate,
                                    const EvalOptions& options) {
    if (options.frames_per_snr <= 0) throw ShapeError("frames_per_snr must be positive");
    std::vector<BerRecord> records;
    records.reserve(snr_grid_db.size());

    for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
        double snr_db = snr_grid_db[si];
        ChannelSpec spec = channel;
        spec.noise_sigma = sigma_from_snr({snr_db, convention, code_rate});

        auto frame_errors = [&](long long f) -> long long {
            std::mt19937_64 msg_rng = make_stream_rng(options.seed, si, f, kStreamMessage);
            std::mt19937_64 noise_rng = make_stream_rng(options.seed, si, f, kStreamNoise);
            std::mt19937_64 sys_rng = make_stream_rng(options.seed, si, f, kStreamSystem);

            std::vector<int> message;
            std::vector<int> codeword;
            if (options.coded_frames) {
                message.resize(code.info_length);
                for (int& b : message) b = static_cast<int>(msg_rng() & 1u);
                codeword = polar_encode(code, message);
            } else {
                codeword.resize(code.block_length);
                for (int& b : codeword) b = static_cast<int>(msg_rng() & 1u);
                message = codeword;
            }
            std::vector<double> symbols = bpsk_modulate(codeword);
            std::vector<double> received = transmit(codeword, spec, noise_rng);
            FrameContext ctx{message, codeword, symbols, received, spec.noise_sigma, sys_rng};
            return system.count_errors(ctx);
        };

        long long errors = 0;
        parallel_frames(options.frames_per_snr, options.threads, frame_errors, &errors);
        long long bits = options.frames_per_snr * static_cast<long long>(system.bits_per_frame);
        records.push_back(make_ber_record(snr_db, convention, bits, errors));
    }
    return records;
}

MonteCarloSystem cnn_equalizer_system(const Network& cnn) {
    MonteCarloSystem sys;
    sys.name = "cnn";
    sys.bits_per_frame = 16;
    sys.count_errors = [&cnn](const FrameContext& ctx) -> long long {
        std::vector<double> soft = equalize(cnn, ctx.received);
        long long errors = 0;
        for (std::size_t i = 0; i < soft.size(); ++i)
            if ((soft[i] >= 0.0) != (ctx.symbols[i] >= 0.0)) ++errors;
        return errors;
    };
    return sys;
}

MonteCarloSystem cnn_nnd_system(const Network& cnn, const Network& nnd) {
    MonteCarloSystem sys;
    sys.name = "cnn_nnd";
    sys.bits_per_frame = 8;
    sys.count_errors = [&cnn, &nnd](const FrameContext& ctx) -> long long {
        std::vector<double> soft = equalize(cnn, ctx.received);
        std::vector<int> decoded = decode_nnd(nnd, soft);
        return count_mismatches(decoded, ctx.message);
    };
    return sys;
}

MonteCarloSystem cnn_sc_system(const Network& cnn, const PolarCode& code) {
    MonteCarloSystem sys;
    sys.name = "cnn_sc";
    sys.bits_per_frame = 8;
    sys.count_errors = [&cnn, &code](const FrameContext& ctx) -> long long {
        std::vector<double> soft = equalize(cnn, ctx.received);
        // Equalized samples scaled as AWGN LLRs; positive favors bit 0.
        std::vector<double> llr(soft.size());
        double s2 = ctx.sigma * ctx.sigma;
        for (std::size_t i = 0; i < soft.size(); ++i) llr[i] = 2.0 * soft[i] / s2;
        std::vector<int> decoded = sc_decode(code, llr);
        return count_mismatches(decoded, ctx.message);
    };
    return sys;
}

MonteCarloSystem bcjr_system(const ChannelSpec& channel) {
    MonteCarloSystem sys;
    sys.name = "bcjr";
    sys.bits_per_frame = 16;
    auto trellis = std::make_shared<Trellis>(channel.taps, channel.nonlinearity);
    sys.count_errors = [trellis](const FrameContext& ctx) -> long long {
        std::vector<double> post = bcjr_equalize(*trellis, ctx.received, ctx.sigma);
        long long errors = 0;
        for (std::size_t i = 0; i < post.size(); ++i)
            if ((post[i] >= 0.5) != (ctx.symbols[i] >= 0.0)) ++errors;
        return errors;
    };
    return sys;
}

MonteCarloSystem bcjr_estimated_system(const ChannelSpec& channel, int pilot_length) {
    MonteCarloSystem sys;
    sys.name = "bcjr_est_n" + std::to_string(pilot_length);
    sys.bits_per_frame = 16;
    ChannelSpec chan = channel;
    int taps = static_cast<int>(channel.taps.size());
    sys.count_errors = [chan, taps, pilot_length](const FrameContext& ctx) -> long long {
        // Fresh pilot per frame; the estimate replaces the true taps.
        std::normal_distribution<double> noise(0.0, ctx.sigma);
        std::vector<double> estimate;
        for (;;) {
            PilotRecord pilot;
            pilot.symbols.resize(pilot_length);
            for (double& s : pilot.symbols)
                s = (ctx.system_rng() & 1u) ? -1.0 : 1.0;
            pilot.observed =
                apply_nonlinearity(fir_convolve(pilot.symbols, chan.taps), chan.nonlinearity);
            for (double& r : pilot.observed) r += noise(ctx.system_rng);
            try {
                estimate = ls_channel_estimate(pilot, taps);
                break;
            } catch (const SingularSystemError&) {
                // Degenerate pilot draw; try the next one.
            }
        }
        Trellis trellis(estimate, chan.nonlinearity);
        std::vector<double> post = bcjr_equalize(trellis, ctx.received, ctx.sigma);
        long long errors = 0;
        for (std::size_t i = 0; i < post.size(); ++i)
            if ((post[i] >= 0.5) != (ctx.symbols[i] >= 0.0)) ++errors;
        return errors;
    };
    return sys;
}

std::vector<BerRecord> map_ber_baseline(const ChannelSpec& channel, const PolarCode& code,
                                        const std::vector<double>& snr_grid_db,
                                        SnrConvention convention, double code_rate,
                                        int pilot_length, const EvalOptions& options) {
    MonteCarloSystem sys =
        pilot_length > 0 ? bcjr_estimated_system(channel, pilot_length) : bcjr_system(channel);
    return evaluate_ber(sys, channel, code, snr_grid_db, convention, code_rate, options);
}

BerRecord uncoded_bpsk_ber(const ChannelSpec& channel, double snr_db, SnrConvention convention,
                           long long total_bits, std::uint64_t seed, int threads) {
    const long long frame_len = 1000;
    long long frames = (total_bits + frame_len - 1) / frame_len;
    ChannelSpec spec = channel;
    spec.noise_sigma = sigma_from_snr({snr_db, convention, 1.0});

    auto frame_errors = [&](long long f) -> long long {
        std::mt19937_64 msg_rng = make_stream_rng(seed, 0, f, kStreamMessage);
        std::mt19937_64 noise_rng = make_stream_rng(seed, 0, f, kStreamNoise);
        std::vector<int> bits(frame_len);
        for (int& b : bits) b = static_cast<int>(msg_rng() & 1u);
        std::vector<double> received = transmit(bits, spec, noise_rng);
        std::vector<int> detected = bpsk_demodulate(received);
        return count_mismatches(detected, bits);
    };

    long long errors = 0;
    parallel_frames(frames, threads, frame_errors, &errors);
    return make_ber_record(snr_db, convention, frames * frame_len, errors);
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double bpsk_awgn_ber(double es_n0_db) {
    return qfunc(std::sqrt(2.0 * std::pow(10.0, es_n0_db / 10.0)));
}

}  // namespace eqnet
