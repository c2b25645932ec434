#pragma once

// Posterior predictive probabilities for the DP+GP classifier.
//
// For each posterior draw s of the latent vector:
//   1. the draw's training values become the anchors of a LinkPosterior,
//   2. latent values at the test inputs are drawn from the GP conditional,
//   3. G(f*) is sampled from its Beta marginal (or replaced by its mean).
// The per-draw probabilities are then averaged and summarized by empirical
// quantiles. With a single draw (analytic backend) the Beta marginal itself
// is summarized: its mean and exact quantiles.

#include "dpgp/dp_link.hpp"
#include "dpgp/hmc.hpp"
#include "dpgp/latent.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace dpgp {

enum class LinkMode { sample, mean };

LinkMode parse_link_mode(std::string_view name);
std::string_view to_string(LinkMode mode);

struct PredictOptions {
  double level = 0.95;
  std::uint64_t seed = 0;
  LinkMode link_mode = LinkMode::sample;
  bool keep_per_draw = false;
  Eigen::Index block_size = kDefaultLatentBlock;

  void validate() const;
};

struct PredictiveSummary {
  Eigen::VectorXd p_mean;
  Eigen::VectorXd p_lo;
  Eigen::VectorXd p_hi;
  double level = 0.95;
  std::optional<Eigen::MatrixXd> per_draw;  // S x m
};

/// Type-7 (linear interpolation) quantile of a sorted sample.
double sorted_quantile(std::span<const double> sorted, double p);

PredictiveSummary predict(const Eigen::MatrixXd& test_inputs,
                          const LatentPosterior& posterior,
                          const DpLinkConfig& dp_cfg,
                          const PredictOptions& options);

struct GridSpec {
  // x1_min, x1_max, x2_min, x2_max
  std::array<double, 4> bounds{-1.0, 1.0, -1.0, 1.0};
  std::size_t resolution = 200;

  void validate() const;
};

/// Data bounding box padded by `pad` on each side.
std::array<double, 4> padded_bounds(const Eigen::MatrixXd& inputs,
                                    double pad = 0.5);

struct GridResult {
  Eigen::VectorXd grid_x1;
  Eigen::VectorXd grid_x2;
  // |grid_x2| x |grid_x1|; entry (i, j) is the point (grid_x1[j], grid_x2[i]).
  Eigen::MatrixXd p_mean;
  Eigen::MatrixXd p_lo;
  Eigen::MatrixXd p_hi;
  double level = 0.95;
};

/// Mesh points in row-major order: x2 outer, x1 inner.
Eigen::MatrixXd grid_points(const GridSpec& spec);

GridResult grid(const GridSpec& spec, const LatentPosterior& posterior,
                const DpLinkConfig& dp_cfg, const PredictOptions& options);

}  // namespace dpgp
