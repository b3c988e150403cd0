// Command-line front end for training, evaluation and the bundled
// experiment presets. All outputs are plain text / CSV, ready for external
// plotting.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "eqnet/channel_estimate.hpp"
#include "eqnet/digest.hpp"
#include "eqnet/experiments.hpp"
#include "eqnet/rng.hpp"

#ifndef EQNET_DATA_FILE
#define EQNET_DATA_FILE "data/reference_curves.txt"
#endif

namespace fs = std::filesystem;
using namespace eqnet;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;  // 0: take the config value
    int threads = 0;         // 0: hardware concurrency
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value)");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)");
    cmd->add_option("--threads", args.threads, "worker threads for evaluation");
}

Config load_config(const CommonArgs& args) {
    Config cfg;
    if (!args.config_path.empty()) cfg = Config::from_file(args.config_path);
    if (args.seed != 0) cfg.set("seed", std::to_string(args.seed));
    return cfg;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_loss_trace(const std::string& path, const TrainResult& result) {
    std::ofstream out(path, std::ios::binary);
    out << "iteration,loss\n";
    for (std::size_t i = 0; i < result.loss_trace.size(); ++i)
        out << i << ',' << format_sci(result.loss_trace[i]) << '\n';
}

void report_records(const std::vector<BerRecord>& records) {
    for (const BerRecord& r : records)
        std::cout << "  " << snr_convention_name(r.convention) << ' ' << r.snr_db
                  << " dB  ber=" << format_sci(r.ber) << "  ci=" << format_sci(r.wilson95_halfwidth)
                  << "  (" << r.bit_errors << '/' << r.bits_tested << ")\n";
}

int cmd_train_cnn(const CommonArgs& args) {
    Config cfg = load_config(args);
    fs::create_directories(args.out_dir);
    ChannelSpec channel = channel_from_config(cfg);
    TrainingConfig tc = training_from_config(cfg);
    PolarCode code = code_from_config(cfg);

    Network cnn = build_cnn_equalizer(cnn_spec_from_config(cfg));
    init_weights(cnn, tc.seed);
    TrainResult result = train_cnn_equalizer(cnn, tc, channel, code);

    std::string ckpt = args.out_dir + "/cnn.ckpt";
    save_model(cnn, ckpt);
    write_loss_trace(args.out_dir + "/cnn_loss.csv", result);
    write_manifest(args.out_dir + "/train_cnn_manifest.txt", cfg,
                   {{"final_loss", format_sci(result.final_loss())},
                    {"config_hash", git_blob_sha1(cfg.echo())},
                    {"params", std::to_string(cnn.param_count())}});
    std::cout << "trained cnn (" << cnn.param_count() << " params), final loss "
              << format_sci(result.final_loss()) << ", saved " << ckpt << '\n';
    return 0;
}

int cmd_train_nnd(const CommonArgs& args) {
    Config cfg = load_config(args);
    fs::create_directories(args.out_dir);
    TrainingConfig tc = training_from_config(cfg);
    tc.iterations = static_cast<int>(cfg.get_int("nnd_iterations", tc.iterations));
    PolarCode code = code_from_config(cfg);

    Network nnd = build_nnd(dnn_spec_from_config(cfg));
    init_weights(nnd, tc.seed);
    TrainResult result = train_nnd_awgn(nnd, tc, code);

    std::string ckpt = args.out_dir + "/nnd.ckpt";
    save_model(nnd, ckpt);
    write_loss_trace(args.out_dir + "/nnd_loss.csv", result);
    write_manifest(args.out_dir + "/train_nnd_manifest.txt", cfg,
                   {{"final_loss", format_sci(result.final_loss())},
                    {"config_hash", git_blob_sha1(cfg.echo())},
                    {"params", std::to_string(nnd.param_count())}});
    std::cout << "trained nnd (" << nnd.param_count() << " params), final loss "
              << format_sci(result.final_loss()) << ", saved " << ckpt << '\n';
    return 0;
}

int cmd_finetune(const CommonArgs& args, const std::string& cnn_path,
                 const std::string& nnd_path) {
    Config cfg = load_config(args);
    fs::create_directories(args.out_dir);
    ChannelSpec channel = channel_from_config(cfg);
    TrainingConfig tc = training_from_config(cfg);
    PolarCode code = code_from_config(cfg);

    Network cnn = load_model(cnn_path);
    Network nnd = load_model(nnd_path);
    JointOptions opt;
    opt.iterations = static_cast<int>(cfg.get_int("finetune_iterations", 2000));
    opt.learning_rate = cfg.get_double("finetune_learning_rate", 5e-4);
    opt.freeze_cnn = cfg.get_bool("freeze_cnn", false);
    TrainResult result = joint_finetune(cnn, nnd, opt, tc, channel, code);

    save_model(cnn, args.out_dir + "/cnn_joint.ckpt");
    save_model(nnd, args.out_dir + "/nnd_joint.ckpt");
    write_loss_trace(args.out_dir + "/joint_loss.csv", result);
    std::cout << "joint fine-tune done, final total loss " << format_sci(result.final_loss())
              << '\n';
    return 0;
}

int cmd_eval_ber(const CommonArgs& args, const std::string& system, const std::string& cnn_path,
                 const std::string& nnd_path, int pilot_length) {
    Config cfg = load_config(args);
    fs::create_directories(args.out_dir);
    ChannelSpec channel = channel_from_config(cfg);
    PolarCode code = code_from_config(cfg);
    SnrConvention conv = convention_from_config(cfg);
    double rate = static_cast<double>(code.info_length) / code.block_length;
    std::vector<double> grid =
        cfg.get_double_list("eval_snr_range", cfg.get_double_list("snr_range", {0, 2, 4, 6, 8}));

    EvalOptions opt;
    opt.frames_per_snr = cfg.get_int("testing_samples_per_snr", 50000);
    opt.seed = cfg.get_u64("seed", 1);
    opt.threads = resolve_threads(args.threads);
    opt.coded_frames = !cfg.get_bool("uncoded", false);

    std::vector<BerRecord> records;
    Network cnn, nnd;
    if (system == "cnn" || system == "cnn_nnd" || system == "cnn_sc") {
        if (cnn_path.empty()) throw ConfigError("--cnn checkpoint required for " + system);
        cnn = load_model(cnn_path);
    }
    if (system == "cnn_nnd") {
        if (nnd_path.empty()) throw ConfigError("--nnd checkpoint required for cnn_nnd");
        nnd = load_model(nnd_path);
    }

    if (system == "cnn")
        records = evaluate_ber(cnn_equalizer_system(cnn), channel, code, grid, conv, rate, opt);
    else if (system == "cnn_nnd")
        records = evaluate_ber(cnn_nnd_system(cnn, nnd), channel, code, grid, conv, rate, opt);
    else if (system == "cnn_sc")
        records = evaluate_ber(cnn_sc_system(cnn, code), channel, code, grid, conv, rate, opt);
    else if (system == "bcjr")
        records = map_ber_baseline(channel, code, grid, conv, rate, 0, opt);
    else if (system == "bcjr_est")
        records = map_ber_baseline(channel, code, grid, conv, rate, pilot_length, opt);
    else if (system == "uncoded") {
        for (double snr : grid)
            records.push_back(uncoded_bpsk_ber(channel, snr, conv,
                                               opt.frames_per_snr, opt.seed, opt.threads));
    } else {
        throw ConfigError("unknown system: " + system);
    }

    std::string path = args.out_dir + "/ber_" + system + ".csv";
    write_ber_csv(path, records);
    std::cout << "system " << system << ":\n";
    report_records(records);
    std::cout << "wrote " << path << '\n';
    return 0;
}

int cmd_estimate_channel(const CommonArgs& args, int pilot_length, int trials) {
    Config cfg = load_config(args);
    ChannelSpec channel = channel_from_config(cfg);
    double snr_db = cfg.get_double("pilot_snr_db", 8.0);
    SnrConvention conv = convention_from_config(cfg);
    double sigma = sigma_from_snr({snr_db, conv, 1.0});
    std::uint64_t seed = cfg.get_u64("seed", 1);
    int L = static_cast<int>(channel.taps.size());

    std::vector<double> mean(L, 0.0);
    double mse = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng = make_stream_rng(seed, 0, t);
        std::normal_distribution<double> noise(0.0, sigma);
        PilotRecord pilot;
        pilot.symbols.resize(pilot_length);
        for (double& s : pilot.symbols) s = (rng() & 1u) ? -1.0 : 1.0;
        pilot.observed = apply_nonlinearity(fir_convolve(pilot.symbols, channel.taps),
                                            channel.nonlinearity);
        for (double& r : pilot.observed) r += noise(rng);
        std::vector<double> est = ls_channel_estimate(pilot, L);
        for (int k = 0; k < L; ++k) {
            mean[k] += est[k] / trials;
            double d = est[k] - channel.taps[k];
            mse += d * d / (trials * L);
        }
    }
    std::cout << "pilot n=" << pilot_length << " trials=" << trials << " snr=" << snr_db
              << " dB\nestimated taps (mean):";
    for (double v : mean) std::cout << ' ' << format_sci(v);
    std::cout << "\nper-tap mse vs true: " << format_sci(mse) << '\n';
    return 0;
}

int cmd_boundary(const CommonArgs& args, const std::string& cnn_path) {
    Config cfg = load_config(args);
    if (!cnn_path.empty()) {
        fs::create_directories(args.out_dir);
        Network cnn = load_model(cnn_path);
        BoundaryGrid grid =
            export_decision_boundary(cnn, cfg.get_double("grid_min", -3.0),
                                     cfg.get_double("grid_max", 3.0),
                                     cfg.get_double("grid_step", 0.05));
        std::string path = args.out_dir + "/boundary.csv";
        write_boundary_csv(path, grid);
        std::cout << "wrote " << path << " (" << grid.decision.size() << " points)\n";
        return 0;
    }
    cfg.set("experiment", "boundary");
    ExperimentResult res =
        run_experiment(cfg, args.out_dir, EQNET_DATA_FILE, resolve_threads(args.threads));
    std::cout << "experiment boundary done, outputs in " << res.out_dir << '\n';
    return 0;
}

int cmd_run_experiment(const CommonArgs& args, std::string experiment) {
    Config cfg = load_config(args);
    if (!experiment.empty()) cfg.set("experiment", experiment);
    if (!cfg.has("experiment")) throw ConfigError("no experiment id given");
    ExperimentResult res =
        run_experiment(cfg, args.out_dir, EQNET_DATA_FILE, resolve_threads(args.threads));
    std::cout << "experiment " << cfg.require_string("experiment") << " done\n";
    for (const auto& [name, path] : res.artifacts) std::cout << "  " << name << ": " << path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural network equalization and decoding over dispersive nonlinear channels"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string system = "cnn";
    std::string cnn_path, nnd_path, experiment;
    int pilot_length = 20;
    int trials = 1000;

    CLI::App* train_cnn = app.add_subcommand("train-cnn", "train the CNN equalizer");
    add_common(train_cnn, args);

    CLI::App* train_nnd = app.add_subcommand("train-nnd", "train the dense decoder over AWGN");
    add_common(train_nnd, args);

    CLI::App* finetune = app.add_subcommand("finetune-joint", "jointly fine-tune CNN + decoder");
    add_common(finetune, args);
    finetune->add_option("--cnn", cnn_path, "CNN checkpoint")->required();
    finetune->add_option("--nnd", nnd_path, "decoder checkpoint")->required();

    CLI::App* eval = app.add_subcommand("eval-ber", "Monte-Carlo BER of a system");
    add_common(eval, args);
    eval->add_option("--system", system, "cnn | cnn_nnd | cnn_sc | bcjr | bcjr_est | uncoded");
    eval->add_option("--cnn", cnn_path, "CNN checkpoint");
    eval->add_option("--nnd", nnd_path, "decoder checkpoint");
    eval->add_option("--pilot-n", pilot_length, "pilot length for bcjr_est");

    CLI::App* sweep = app.add_subcommand("sweep-structures", "train/evaluate several CNN sizes");
    add_common(sweep, args);

    CLI::App* boundary = app.add_subcommand("boundary", "export a decision boundary grid");
    add_common(boundary, args);
    boundary->add_option("--cnn", cnn_path, "export from an existing checkpoint");

    CLI::App* baseline = app.add_subcommand("baseline-map", "posterior equalizer baseline BER");
    add_common(baseline, args);
    baseline->add_option("--pilot-n", pilot_length, "pilot length (0 = perfect CSI)");

    CLI::App* estimate = app.add_subcommand("estimate-channel", "least-squares tap estimation");
    add_common(estimate, args);
    estimate->add_option("--pilot-n", pilot_length, "pilot length");
    estimate->add_option("--trials", trials, "number of pilot draws");

    CLI::App* runexp = app.add_subcommand("run-experiment", "run a named experiment preset");
    add_common(runexp, args);
    runexp->add_option("--experiment", experiment,
                       "fig2_sweep | fig3_linear | fig5_nonlinear | fig6_joint | boundary");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cnn->parsed()) return cmd_train_cnn(args);
        if (train_nnd->parsed()) return cmd_train_nnd(args);
        if (finetune->parsed()) return cmd_finetune(args, cnn_path, nnd_path);
        if (eval->parsed()) return cmd_eval_ber(args, system, cnn_path, nnd_path, pilot_length);
        if (sweep->parsed()) return cmd_run_experiment(args, "fig2_sweep");
        if (boundary->parsed()) return cmd_boundary(args, cnn_path);
        if (baseline->parsed()) {
            Config cfg = load_config(args);
            fs::create_directories(args.out_dir);
            ChannelSpec channel = channel_from_config(cfg);
            PolarCode code = code_from_config(cfg);
            SnrConvention conv = convention_from_config(cfg);
            double rate = static_cast<double>(code.info_length) / code.block_length;
            std::vector<double> grid = cfg.get_double_list(
                "eval_snr_range", cfg.get_double_list("snr_range", {0, 1, 2, 3, 4, 5, 6, 7, 8}));
            EvalOptions opt;
            opt.frames_per_snr = cfg.get_int("testing_samples_per_snr", 50000);
            opt.seed = cfg.get_u64("seed", 1);
            opt.threads = resolve_threads(args.threads);
            auto records =
                map_ber_baseline(channel, code, grid, conv, rate, pilot_length, opt);
            std::string path = args.out_dir + "/ber_bcjr" +
                               (pilot_length > 0 ? "_n" + std::to_string(pilot_length) : "") +
                               ".csv";
            write_ber_csv(path, records);
            report_records(records);
            std::cout << "wrote " << path << '\n';
            return 0;
        }
        if (estimate->parsed()) return cmd_estimate_channel(args, pilot_length, trials);
        if (runexp->parsed()) return cmd_run_experiment(args, experiment);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
