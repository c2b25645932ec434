#pragma once

// Latent-function inference with two interchangeable backends.
//
//  * hmc: posterior draws of f at the training inputs under a logistic
//    surrogate likelihood (see hmc.hpp).
//  * analytic: a single deterministic latent vector, the GP-regression
//    posterior mean on targets z_i = 2 y_i - 1 with observation noise tau^2:
//      f_hat = mean + K (K + tau^2 I)^{-1} (z - mean).
//
// Downstream code consumes a LatentPosterior and latent_at() output and does
// not care which backend produced them.

#include "dpgp/dataset.hpp"
#include "dpgp/gp.hpp"
#include "dpgp/hmc.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace dpgp {

struct LatentBackend {
  LatentBackendKind kind = LatentBackendKind::hmc;
  HmcConfig hmc;
  double surrogate_noise = 1.0;  // tau^2, analytic backend only

  void validate() const;
};

LatentBackendKind parse_backend_kind(std::string_view name);
std::string_view to_string(LatentBackendKind kind);

LatentPosterior fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& labels,
                    const GpConfig& gp_cfg, const LatentBackend& backend);
LatentPosterior fit(const Dataset& train, const GpConfig& gp_cfg,
                    const LatentBackend& backend);

/// Test points are processed in blocks of this many rows; one joint
/// conditional draw is taken per (posterior draw, block).
inline constexpr Eigen::Index kDefaultLatentBlock = 256;

/// Precomputed K^{-1} (f_s - mean) for every posterior draw, shared by all
/// blocks of test points.
class LatentPredictor {
 public:
  LatentPredictor(const LatentPosterior& posterior, std::uint64_t seed);

  /// Latent values at `block_inputs` (S x rows). `block_index` selects the
  /// random stream, so the same block always gets the same draws.
  Eigen::MatrixXd block(const Eigen::MatrixXd& block_inputs,
                        std::uint64_t block_index) const;

  Eigen::Index num_draws() const { return weights_.cols(); }

 private:
  const LatentPosterior* posterior_;
  std::uint64_t seed_;
  Eigen::MatrixXd weights_;  // n x S
};

/// Latent values at test inputs, one row per posterior draw. The hmc backend
/// samples from the GP conditional given each draw; the analytic backend
/// returns the conditional mean and ignores `seed`.
Eigen::MatrixXd latent_at(const Eigen::MatrixXd& test_inputs,
                          const LatentPosterior& posterior, std::uint64_t seed,
                          Eigen::Index block_size = kDefaultLatentBlock);

}  // namespace dpgp
