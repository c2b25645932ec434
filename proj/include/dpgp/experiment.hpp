#pragma once

// One-shot experiment description and runner. The runner is a plain
// composition of the stage functions below, which the CLI subcommands also
// call, so running the stages one by one reproduces its files exactly.

#include "dpgp/baseline.hpp"
#include "dpgp/dataset.hpp"
#include "dpgp/dp_link.hpp"
#include "dpgp/gp.hpp"
#include "dpgp/latent.hpp"
#include "dpgp/metrics.hpp"
#include "dpgp/predict.hpp"

#include "json.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>

namespace dpgp {

struct DatasetSpec {
  DatasetKind kind = DatasetKind::moons;
  std::size_t n = 1000;
  double noise = 0.3;
  std::uint64_t seed = 42;
  double inner_radius_factor = 0.5;
  double train_fraction = 0.7;
  std::uint64_t split_seed = 42;
};

struct GridOptions {
  bool enabled = true;
  std::size_t resolution = 200;
  std::optional<std::array<double, 4>> bounds;  // default: padded data box
  double pad = 0.5;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  GpConfig gp;
  LatentBackend backend;
  DpLinkConfig dp;
  PredictOptions predict;
  GridOptions grid;
  LogRegOptions logreg;
  std::string output_dir;

  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "DPGP_OUTPUT_DIR";

// Stages ----------------------------------------------------------------

Dataset generate(const DatasetSpec& spec);

/// Predictions of the baseline in the predictions-file layout (no band).
PredictiveSummary logreg_summary(const LogRegModel& model,
                                 const Eigen::MatrixXd& inputs, double level);

GridSpec resolve_grid(const GridOptions& opts,
                      const Eigen::MatrixXd& train_inputs);

// Runner ----------------------------------------------------------------

struct ExperimentResult {
  MetricsReport dpgp;
  MetricsReport logreg;
  double accept_rate = 1.0;
  std::filesystem::path output_dir;
};

/// Runs generate -> split -> fit (DP+GP, LogReg) -> predict -> evaluate ->
/// grid and writes every artifact into `out_dir`:
///   config.json dataset.csv train.csv test.csv
///   posterior.json posterior.draws.csv logreg.json
///   predictions_dpgp.csv predictions_logreg.csv
///   metrics_dpgp.json metrics_logreg.json metrics.json grid.csv
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir);

/// Two-row table in the layout Model | AUC | Brier Score | LogLoss.
std::string format_table(const ExperimentResult& r, const std::string& title);

}  // namespace dpgp
