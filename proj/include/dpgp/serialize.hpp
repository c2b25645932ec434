#pragma once

// JSON and CSV file formats. Every file written here carries a
// `format_version`; readers reject anything else.
//
//   posterior   <prefix>.json sidecar + <prefix>.draws.csv (S rows x n cols)
//   logreg      single JSON document
//   predictions "# dpgp-predictions format_version=1 level=<l>" then
//               "index,p_mean,p_lo,p_hi"
//   grid        "# dpgp-grid format_version=1 resolution=<r> level=<l>" then
//               "x1,x2,p_mean,p_lo,p_hi", x2 outer / x1 inner
//   metrics     JSON with auc, brier, logloss, n_test

#include "dpgp/baseline.hpp"
#include "dpgp/dp_link.hpp"
#include "dpgp/gp.hpp"
#include "dpgp/hmc.hpp"
#include "dpgp/latent.hpp"
#include "dpgp/metrics.hpp"
#include "dpgp/predict.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace dpgp {

inline constexpr int kFormatVersion = 1;

void to_json(nlohmann::json& j, const GpConfig& c);
void from_json(const nlohmann::json& j, GpConfig& c);
void to_json(nlohmann::json& j, const HmcConfig& c);
void from_json(const nlohmann::json& j, HmcConfig& c);
void to_json(nlohmann::json& j, const DpLinkConfig& c);
void from_json(const nlohmann::json& j, DpLinkConfig& c);
void to_json(nlohmann::json& j, const LogRegOptions& c);
void from_json(const nlohmann::json& j, LogRegOptions& c);
void to_json(nlohmann::json& j, const MetricsReport& r);
void from_json(const nlohmann::json& j, MetricsReport& r);

/// Fixed-layout JSON text (two-space indent, trailing newline).
std::string dump(const nlohmann::json& j);
nlohmann::json parse_json_file(const std::filesystem::path& path);

/// Checks `format_version` and, when given, the `kind` tag.
void check_format(const nlohmann::json& j, const std::string& kind,
                  const std::string& source);

// Latent posterior ------------------------------------------------------

std::filesystem::path draws_path_for(const std::filesystem::path& sidecar);

/// Writes `sidecar` and the draws matrix next to it.
void save_posterior(const LatentPosterior& post, const LatentBackend& backend,
                    const std::filesystem::path& sidecar);

/// Reads a posterior and rebuilds its factorization from `train_inputs`,
/// which must be the inputs the posterior was fitted on.
LatentPosterior load_posterior(const std::filesystem::path& sidecar,
                               const Eigen::MatrixXd& train_inputs);

// Logistic regression ---------------------------------------------------

nlohmann::json logreg_to_json(const LogRegModel& model);
LogRegModel logreg_from_json(const nlohmann::json& j);

// Predictions -----------------------------------------------------------

std::string predictions_to_csv(const PredictiveSummary& s);
PredictiveSummary predictions_from_csv(std::string_view text);

std::string grid_to_csv(const GridResult& g);

nlohmann::json metrics_document(const std::string& model,
                                const MetricsReport& r);

}  // namespace dpgp
