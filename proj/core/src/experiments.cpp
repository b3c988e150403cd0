#include "eqnet/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "eqnet/digest.hpp"
#include "eqnet/errors.hpp"

namespace eqnet {

namespace fs = std::filesystem;

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids = {"fig2_sweep", "fig3_linear", "fig5_nonlinear",
                                                 "fig6_joint", "boundary"};
    return ids;
}

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5e", v);
    return buf;
}

void write_ber_csv(const std::string& path, const std::vector<BerRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write csv: " + path);
    out << "snr_db,ber,ci\n";
    for (const BerRecord& r : records)
        out << format_sci(r.snr_db) << ',' << format_sci(r.ber) << ','
            << format_sci(r.wilson95_halfwidth) << '\n';
}

void write_reference_csv(const std::string& path, const ReferenceCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write csv: " + path);
    out << "snr_db,ber,ci\n";
    for (std::size_t i = 0; i < curve.snr_db.size(); ++i)
        out << format_sci(curve.snr_db[i]) << ',' << format_sci(curve.ber[i]) << ','
            << format_sci(0.0) << '\n';
}

BoundaryGrid export_decision_boundary(const Network& cnn, double grid_min, double grid_max,
                                      double step) {
    if (!(step > 0.0) || !(grid_max > grid_min)) throw ShapeError("bad boundary grid");
    BoundaryGrid grid;
    grid.grid_min = grid_min;
    grid.grid_max = grid_max;
    grid.step = step;
    grid.axis_points = static_cast<std::size_t>((grid_max - grid_min) / step + 0.5) + 1;

    std::size_t total = grid.axis_points * grid.axis_points;
    grid.r1.reserve(total);
    grid.r2.reserve(total);
    grid.decision.reserve(total);
    for (std::size_t i = 0; i < grid.axis_points; ++i) {
        double r2 = grid_min + static_cast<double>(i) * step;
        for (std::size_t j = 0; j < grid.axis_points; ++j) {
            double r1 = grid_min + static_cast<double>(j) * step;
            // Decision for the first sample of the window (r1, r2).
            std::vector<double> soft = equalize(cnn, {r1, r2});
            grid.r1.push_back(r1);
            grid.r2.push_back(r2);
            grid.decision.push_back(soft[0] >= 0.0 ? +1 : -1);
        }
    }
    return grid;
}

void write_boundary_csv(const std::string& path, const BoundaryGrid& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write csv: " + path);
    out << "r1,r2,decision\n";
    for (std::size_t i = 0; i < grid.r1.size(); ++i)
        out << format_sci(grid.r1[i]) << ',' << format_sci(grid.r2[i]) << ','
            << grid.decision[i] << '\n';
}

ChannelSpec channel_from_config(const Config& cfg) {
    ChannelSpec spec;
    spec.taps = cfg.get_double_list("channel_taps", {1.0});
    spec.nonlinearity = nonlinearity_from_name(cfg.get_string("nonlinearity", "identity"));
    return spec;
}

SnrConvention convention_from_config(const Config& cfg) {
    return snr_convention_from_name(cfg.get_string("snr_convention", "es_n0"));
}

TrainingConfig training_from_config(const Config& cfg) {
    TrainingConfig tc;
    tc.snr_grid_db = cfg.get_double_list("snr_range", tc.snr_grid_db);
    tc.frames_per_snr = static_cast<int>(cfg.get_int("training_samples_per_snr", 20));
    tc.iterations = static_cast<int>(cfg.get_int("iterations", 5000));
    tc.learning_rate = cfg.get_double("learning_rate", 1e-3);
    tc.seed = cfg.get_u64("seed", 1);
    tc.convention = convention_from_config(cfg);
    int code_n = static_cast<int>(cfg.get_int("code_n", 16));
    int code_k = static_cast<int>(cfg.get_int("code_k", 8));
    tc.frame_info_bits = code_k;
    tc.code_rate = static_cast<double>(code_k) / static_cast<double>(code_n);

    long long batch = cfg.get_int("mini_batch_size",
                                  tc.frames_per_snr * static_cast<long long>(tc.snr_grid_db.size()));
    if (batch != tc.batch_size())
        throw ConfigError("mini_batch_size must equal training_samples_per_snr * |snr_range|");
    return tc;
}

NetworkSpec cnn_spec_from_config(const Config& cfg) {
    NetworkSpec spec = NetworkSpec::cnn(cfg.get_int_list("cnn_structure", {6, 12, 24, 12, 6, 1}),
                                        static_cast<int>(cfg.get_int("kernel_size", 3)));
    return spec;
}

NetworkSpec dnn_spec_from_config(const Config& cfg) {
    return NetworkSpec::dnn(cfg.get_int_list("dnn_structure", {16, 128, 64, 32, 8}));
}

PolarCode code_from_config(const Config& cfg) {
    return PolarCode::construct(static_cast<int>(cfg.get_int("code_n", 16)),
                                static_cast<int>(cfg.get_int("code_k", 8)),
                                cfg.get_double("design_param", 0.5));
}

void write_manifest(const std::string& path, const Config& cfg,
                    const std::map<std::string, std::string>& extra) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path);
    out << "# run manifest\n";
    out << cfg.echo();
    for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
}

namespace {

std::string structure_tag(const std::vector<int>& sizes) {
    std::string tag;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) tag += '_';
        tag += std::to_string(sizes[i]);
    }
    return tag;
}

// Per-experiment defaults; explicit config keys always win.
void apply_defaults(Config& cfg, const std::string& id) {
    auto def = [&cfg](const std::string& k, const std::string& v) {
        if (!cfg.has(k)) cfg.set(k, v);
    };
    def("seed", "1");
    def("code_n", "16");
    def("code_k", "8");
    def("cnn_structure", "6,12,24,12,6,1");
    def("kernel_size", "3");
    def("dnn_structure", "16,128,64,32,8");
    def("snr_range", "0:11");
    def("training_samples_per_snr", "20");
    def("testing_samples_per_snr", "50000");
    def("learning_rate", "0.001");
    def("iterations", "5000");

    if (id == "fig2_sweep") {
        def("channel_taps", "0.3482,0.8704,0.3482");
        def("nonlinearity", "identity");
        def("snr_convention", "es_n0");
        def("eval_snr_range", "0:8");
        def("sweep_structures",
            "8,16,8,1; 16,32,16,1; 32,64,32,1; 4,8,16,8,4,1; 8,16,32,16,8,1; 6,12,24,12,6,1");
    } else if (id == "fig3_linear") {
        def("channel_taps", "0.3482,0.8704,0.3482");
        def("nonlinearity", "identity");
        def("snr_convention", "es_n0");
        def("eval_snr_range", "0:8");
        def("pilot_lengths", "10,20");
    } else if (id == "fig5_nonlinear") {
        def("channel_taps", "0.3482,0.8704,0.3482");
        def("nonlinearity", "poly_cos");
        def("snr_convention", "eb_n0");
        def("eval_snr_range", "2:7");
    } else if (id == "fig6_joint") {
        def("channel_taps", "0.3482,0.8704,0.3482");
        def("nonlinearity", "poly_cos");
        def("snr_convention", "eb_n0");
        def("eval_snr_range", "1,3,5,7,9,11");
        def("nnd_iterations", "30000");
        def("finetune_iterations", "2000");
        def("finetune_learning_rate", "0.0005");
        def("freeze_cnn", "false");
    } else if (id == "boundary") {
        def("channel_taps", "1,0.5");
        def("nonlinearity", "cubic");
        def("snr_convention", "es_n0");
        def("snr_range", "1:1");
        def("training_samples_per_snr", "240");
        def("grid_min", "-3");
        def("grid_max", "3");
        def("grid_step", "0.05");
    } else {
        throw ConfigError("unknown experiment id: " + id);
    }
}

std::string info_set_string(const PolarCode& code) {
    std::string out;
    for (std::size_t i = 0; i < code.info_set.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(code.info_set[i]);
    }
    return out;
}

struct Runner {
    Config cfg;
    std::string out_dir;
    std::string curves_path;
    int threads;
    ExperimentResult result;
    std::map<std::string, std::string> manifest;

    EvalOptions eval_options() const {
        EvalOptions opt;
        opt.frames_per_snr = cfg.get_int("testing_samples_per_snr", 50000);
        opt.seed = cfg.get_u64("seed", 1) + 0x517cc1b727220a95ULL;  // eval stream, not training
        opt.threads = threads;
        opt.coded_frames = !cfg.get_bool("uncoded", false);
        return opt;
    }

    std::vector<double> eval_grid() const {
        return cfg.get_double_list("eval_snr_range", cfg.get_double_list("snr_range", {}));
    }

    void save_curve(const std::string& name, const std::vector<BerRecord>& records) {
        std::string path = out_dir + "/" + name + ".csv";
        write_ber_csv(path, records);
        result.artifacts[name] = path;
        for (const BerRecord& r : records)
            result.metrics[name + "@" + format_sci(r.snr_db)] = r.ber;
    }

    void save_reference(const ReferenceCurves& rc, const std::string& figure,
                        const std::string& name) {
        std::string path = out_dir + "/ref_" + name + ".csv";
        write_reference_csv(path, rc.curve(figure, name));
        result.artifacts["ref_" + name] = path;
    }

    void save_model_artifact(const Network& net, const std::string& name) {
        std::string path = out_dir + "/" + name + ".ckpt";
        save_model(net, path);
        result.artifacts[name] = path;
    }
};

void run_fig2(Runner& r) {
    ChannelSpec channel = channel_from_config(r.cfg);
    TrainingConfig tc = training_from_config(r.cfg);
    PolarCode code = code_from_config(r.cfg);
    SnrConvention conv = convention_from_config(r.cfg);
    auto structures = r.cfg.get_int_list_list("sweep_structures");
    int kernel = static_cast<int>(r.cfg.get_int("kernel_size", 3));

    for (const auto& sizes : structures) {
        Network cnn = build_cnn_equalizer(NetworkSpec::cnn(sizes, kernel));
        init_weights(cnn, tc.seed);
        train_cnn_equalizer(cnn, tc, channel, code);
        auto records = evaluate_ber(cnn_equalizer_system(cnn), channel, code, r.eval_grid(), conv,
                                    tc.code_rate, r.eval_options());
        std::string tag = "cnn_" + structure_tag(sizes);
        r.save_curve(tag, records);
        r.save_model_artifact(cnn, tag);
    }
}

void run_fig3(Runner& r) {
    ChannelSpec channel = channel_from_config(r.cfg);
    TrainingConfig tc = training_from_config(r.cfg);
    PolarCode code = code_from_config(r.cfg);
    SnrConvention conv = convention_from_config(r.cfg);
    std::vector<double> grid = r.eval_grid();
    EvalOptions opt = r.eval_options();

    Network cnn = build_cnn_equalizer(cnn_spec_from_config(r.cfg));
    init_weights(cnn, tc.seed);
    TrainResult train = train_cnn_equalizer(cnn, tc, channel, code);
    r.manifest["final_train_loss"] = format_sci(train.final_loss());
    r.save_model_artifact(cnn, "cnn");

    r.save_curve("cnn", evaluate_ber(cnn_equalizer_system(cnn), channel, code, grid, conv,
                                     tc.code_rate, opt));
    r.save_curve("bcjr_perfect",
                 map_ber_baseline(channel, code, grid, conv, tc.code_rate, 0, opt));
    for (int n : r.cfg.get_int_list("pilot_lengths", {10, 20}))
        r.save_curve("bcjr_est_n" + std::to_string(n),
                     map_ber_baseline(channel, code, grid, conv, tc.code_rate, n, opt));

    ReferenceCurves rc = ReferenceCurves::load(r.curves_path);
    for (const char* name : {"perfect_csi", "ml_bcjr_n10", "ml_bcjr_n20", "bayesian_n10",
                             "bayesian_n20"})
        r.save_reference(rc, "fig3", name);
}

void run_fig5(Runner& r) {
    ChannelSpec channel = channel_from_config(r.cfg);
    TrainingConfig tc = training_from_config(r.cfg);
    PolarCode code = code_from_config(r.cfg);
    SnrConvention conv = convention_from_config(r.cfg);

    Network cnn = build_cnn_equalizer(cnn_spec_from_config(r.cfg));
    init_weights(cnn, tc.seed);
    TrainResult train = train_cnn_equalizer(cnn, tc, channel, code);
    r.manifest["final_train_loss"] = format_sci(train.final_loss());
    r.save_model_artifact(cnn, "cnn");

    r.save_curve("cnn", evaluate_ber(cnn_equalizer_system(cnn), channel, code, r.eval_grid(),
                                     conv, tc.code_rate, r.eval_options()));

    ReferenceCurves rc = ReferenceCurves::load(r.curves_path);
    r.save_reference(rc, "fig5", "gpc");
    r.save_reference(rc, "fig5", "svm");
}

void run_fig6(Runner& r) {
    ChannelSpec channel = channel_from_config(r.cfg);
    TrainingConfig tc = training_from_config(r.cfg);
    PolarCode code = code_from_config(r.cfg);
    SnrConvention conv = convention_from_config(r.cfg);
    std::vector<double> grid = r.eval_grid();
    EvalOptions opt = r.eval_options();

    Network cnn = build_cnn_equalizer(cnn_spec_from_config(r.cfg));
    init_weights(cnn, tc.seed);
    train_cnn_equalizer(cnn, tc, channel, code);
    r.save_model_artifact(cnn, "cnn");

    Network nnd = build_nnd(dnn_spec_from_config(r.cfg));
    init_weights(nnd, tc.seed + 1);
    TrainingConfig nnd_tc = tc;
    nnd_tc.iterations = static_cast<int>(r.cfg.get_int("nnd_iterations", 30000));
    train_nnd_awgn(nnd, nnd_tc, code);
    r.save_model_artifact(nnd, "nnd");

    r.save_curve("cnn_nnd",
                 evaluate_ber(cnn_nnd_system(cnn, nnd), channel, code, grid, conv, tc.code_rate,
                              opt));

    Network cnn_joint = cnn;
    Network nnd_joint = nnd;
    JointOptions jopt;
    jopt.iterations = static_cast<int>(r.cfg.get_int("finetune_iterations", 2000));
    jopt.learning_rate = r.cfg.get_double("finetune_learning_rate", 5e-4);
    jopt.freeze_cnn = r.cfg.get_bool("freeze_cnn", false);
    TrainingConfig joint_tc = tc;
    joint_tc.seed = tc.seed + 2;
    joint_finetune(cnn_joint, nnd_joint, jopt, joint_tc, channel, code);
    r.save_model_artifact(cnn_joint, "cnn_joint");
    r.save_model_artifact(nnd_joint, "nnd_joint");

    r.save_curve("cnn_nnd_joint",
                 evaluate_ber(cnn_nnd_system(cnn_joint, nnd_joint), channel, code, grid, conv,
                              tc.code_rate, opt));

    ReferenceCurves rc = ReferenceCurves::load(r.curves_path);
    r.save_reference(rc, "fig6", "gpc_sc");
    r.save_reference(rc, "fig6", "dl");
}

void run_boundary(Runner& r) {
    ChannelSpec channel = channel_from_config(r.cfg);
    TrainingConfig tc = training_from_config(r.cfg);
    PolarCode code = code_from_config(r.cfg);

    Network cnn = build_cnn_equalizer(cnn_spec_from_config(r.cfg));
    init_weights(cnn, tc.seed);
    train_cnn_equalizer(cnn, tc, channel, code);
    r.save_model_artifact(cnn, "cnn");

    BoundaryGrid grid = export_decision_boundary(cnn, r.cfg.get_double("grid_min", -3.0),
                                                 r.cfg.get_double("grid_max", 3.0),
                                                 r.cfg.get_double("grid_step", 0.05));
    std::string path = r.out_dir + "/boundary.csv";
    write_boundary_csv(path, grid);
    r.result.artifacts["boundary"] = path;
    r.result.metrics["grid_points"] = static_cast<double>(grid.decision.size());
}

}  // namespace

ExperimentResult run_experiment(const Config& cfg_in, const std::string& out_root,
                                const std::string& reference_curves_path, int threads) {
    std::string id = cfg_in.require_string("experiment");
    Config cfg = cfg_in;
    apply_defaults(cfg, id);

    Runner r{cfg, (fs::path(out_root) / id).string(), reference_curves_path, threads, {}, {}};
    fs::create_directories(r.out_dir);
    r.result.out_dir = r.out_dir;

    auto t0 = std::chrono::steady_clock::now();
    if (id == "fig2_sweep")
        run_fig2(r);
    else if (id == "fig3_linear")
        run_fig3(r);
    else if (id == "fig5_nonlinear")
        run_fig5(r);
    else if (id == "fig6_joint")
        run_fig6(r);
    else if (id == "boundary")
        run_boundary(r);
    auto t1 = std::chrono::steady_clock::now();

    r.manifest["experiment"] = id;
    r.manifest["config_hash"] = git_blob_sha1(cfg.echo());
    r.manifest["wall_time_s"] =
        format_sci(std::chrono::duration<double>(t1 - t0).count());
    r.manifest["info_set"] = info_set_string(code_from_config(cfg));
    for (const auto& [k, v] : r.result.metrics) r.manifest["metric." + k] = format_sci(v);
    write_manifest(r.out_dir + "/manifest.txt", cfg, r.manifest);

    return r.result;
}

}  // namespace eqnet
