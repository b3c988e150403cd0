#pragma once

#include <map>
#include <string>
#include <vector>

#include "eqnet/ber.hpp"
#include "eqnet/config.hpp"
#include "eqnet/models.hpp"
#include "eqnet/reference_curves.hpp"

namespace eqnet {

// Stable experiment ids; each doubles as the output directory name.
//   fig2_sweep     structure sweep on the linear dispersive channel
//   fig3_linear    CNN vs MAP baselines, linear channel
//   fig5_nonlinear CNN on the poly_cos nonlinear channel
//   fig6_joint     cascaded and jointly fine-tuned CNN+NND
//   boundary       decision boundary grid export
const std::vector<std::string>& experiment_ids();

// Scientific notation, 6 significant digits; the CSV number format.
std::string format_sci(double v);

// Curve CSV: header `snr_db,ber,ci`, LF endings.
void write_ber_csv(const std::string& path, const std::vector<BerRecord>& records);
void write_reference_csv(const std::string& path, const ReferenceCurve& curve);

struct BoundaryGrid {
    double grid_min = -3.0;
    double grid_max = 3.0;
    double step = 0.05;
    std::size_t axis_points = 0;
    std::vector<double> r1;     // row-major over (r2 outer, r1 inner)
    std::vector<double> r2;
    std::vector<int> decision;  // +1 / -1
};

// Feeds every (r1, r2) window through the equalizer and records the hard
// decision for the first window sample.
BoundaryGrid export_decision_boundary(const Network& cnn, double grid_min, double grid_max,
                                      double step);
void write_boundary_csv(const std::string& path, const BoundaryGrid& grid);

struct ExperimentResult {
    std::string out_dir;
    std::map<std::string, double> metrics;
    std::map<std::string, std::string> artifacts;  // label -> path
};

// Dispatches on cfg "experiment"; writes curve CSVs, checkpoints and a
// manifest under <out_root>/<experiment id>/.
ExperimentResult run_experiment(const Config& cfg, const std::string& out_root,
                                const std::string& reference_curves_path, int threads);

// Helpers shared by the CLI subcommands.
ChannelSpec channel_from_config(const Config& cfg);
TrainingConfig training_from_config(const Config& cfg);
NetworkSpec cnn_spec_from_config(const Config& cfg);
NetworkSpec dnn_spec_from_config(const Config& cfg);
PolarCode code_from_config(const Config& cfg);
SnrConvention convention_from_config(const Config& cfg);

void write_manifest(const std::string& path, const Config& cfg,
                    const std::map<std::string, std::string>& extra);

}  // namespace eqnet
