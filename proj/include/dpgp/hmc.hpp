#pragma once

// Hamiltonian Monte Carlo for the latent GP vector under a logistic
// Bernoulli likelihood.
//
// The sampler works in whitened coordinates: f = mean + L eta with L the
// Cholesky factor of the Gram matrix, so the prior on eta is N(0, I). Each
// iteration draws fresh standard-normal momenta, runs a fixed number of
// leapfrog steps and accepts with probability min(1, exp(H_old - H_new)).
// The step size is tuned during warmup by dual averaging and frozen after.

#include "dpgp/gp.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace dpgp {

struct HmcConfig {
  std::size_t warmup = 1000;
  std::size_t samples = 1000;
  std::size_t leapfrog_steps = 32;
  double target_accept = 0.8;
  double initial_step_size = 0.1;
  std::size_t chains = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class LatentBackendKind { hmc, analytic };

/// Draws of the latent vector at the training inputs (one row per draw),
/// together with the factorization they were conditioned on.
struct LatentPosterior {
  Eigen::MatrixXd draws;
  CholeskyGram chol;
  LatentBackendKind backend = LatentBackendKind::hmc;
  /// Post-warmup acceptance rate over all chains (1 for the analytic backend).
  double accept_rate = 1.0;
  std::vector<double> chain_accept_rates;
  std::vector<double> chain_step_sizes;

  Eigen::Index num_draws() const { return draws.rows(); }
  Eigen::Index num_train() const { return draws.cols(); }
};

struct PotentialValue {
  double value = 0.0;
  Eigen::VectorXd grad;
};

/// U(eta) = 0.5 |eta|^2 + sum_i softplus(f_i) - y_i f_i with f = mean + L eta,
/// and its gradient eta + L^T (sigmoid(f) - y).
PotentialValue potential(const Eigen::VectorXd& eta, const Eigen::VectorXd& y,
                         const CholeskyGram& chol, double mean);

/// Runs cfg.chains chains (seeds derived from cfg.seed) and concatenates
/// their post-warmup draws. Throws NumericalError when the post-warmup
/// acceptance rate of any chain falls below 0.1.
LatentPosterior sample(const Eigen::VectorXd& y, const CholeskyGram& chol,
                       double mean, const HmcConfig& cfg);

inline constexpr double kMinAcceptRate = 0.1;

double softplus(double x);
double sigmoid(double x);

namespace detail {

// Likelihood swaps used to check the sampler against known targets.
enum class Likelihood {
  bernoulli_logit,
  prior_only,
  gaussian,  // y_i ~ N(f_i, noise_variance)
};

struct Target {
  Likelihood likelihood = Likelihood::bernoulli_logit;
  Eigen::VectorXd y;
  double noise_variance = 1.0;
};

PotentialValue potential(const Target& target, const Eigen::VectorXd& eta,
                         const CholeskyGram& chol, double mean);

struct ChainResult {
  Eigen::MatrixXd eta;  // samples x n
  Eigen::MatrixXd f;    // samples x n
  double accept_rate = 0.0;
  double step_size = 0.0;
};

ChainResult run_chain(const Target& target, const CholeskyGram& chol,
                      double mean, const HmcConfig& cfg, std::uint64_t seed);

/// H(end) - H(start) of one leapfrog trajectory.
double energy_error(const Target& target, const CholeskyGram& chol,
                    double mean, const Eigen::VectorXd& eta,
                    const Eigen::VectorXd& momentum, double step_size,
                    std::size_t steps);

}  // namespace detail
}  // namespace dpgp
