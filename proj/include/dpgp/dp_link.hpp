#pragma once

// Dirichlet-process posterior for the random link function.
//
// Given latent values f(x_1..x_n) treated as a sample from G ~ DP(alpha, G0),
// the posterior of G(t) is Beta(alpha G0(t) + m, alpha (1 - G0(t)) + n - m)
// with m = #{f(x_i) <= t}. Its mean is the Ferguson estimator
//
//   (alpha G0(t) + m) / (alpha + n) = gamma_n G0(t) + (1 - gamma_n) F_n(t),
//   gamma_n = alpha / (alpha + n),
//
// where G0 is normalized to a probability measure (a logistic CDF here).
// Nothing in this module sees the class labels.

#include "dpgp/random.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace dpgp {

struct DpLinkConfig {
  double alpha = 1.0;
  double base_location = 0.0;
  double base_scale = 1.0;

  void validate() const;
};

/// Logistic CDF 1 / (1 + exp(-(t - location) / scale)).
double base_cdf(double t, const DpLinkConfig& cfg);
/// 1 - base_cdf(t), computed without cancellation.
double base_survival(double t, const DpLinkConfig& cfg);

struct BetaParams {
  double a = 0.0;
  double b = 0.0;

  double mean() const { return a / (a + b); }
  double variance() const {
    const double s = a + b;
    return a * b / (s * s * (s + 1.0));
  }
};

class LinkPosterior {
 public:
  /// Anchors are copied and sorted; they must be finite.
  LinkPosterior(const DpLinkConfig& cfg, std::span<const double> anchors);
  LinkPosterior(const DpLinkConfig& cfg, const Eigen::Ref<const Eigen::RowVectorXd>& anchors);

  const DpLinkConfig& config() const { return cfg_; }
  const std::vector<double>& anchors() const { return anchors_; }
  std::size_t size() const { return anchors_.size(); }

  /// Number of anchors <= t (ties inclusive).
  std::size_t count_leq(double t) const;
  /// Posterior mean of G(t).
  double ferguson_mean(double t) const;
  /// Parameters of the Beta marginal of G(t).
  BetaParams beta_params(double t) const;
  /// One draw of G(t).
  double sample_g(double t, Rng& rng) const;

 private:
  DpLinkConfig cfg_;
  std::vector<double> anchors_;
};

/// Quantile function of Beta(a, b) by incomplete-beta inversion.
double beta_quantile(const BetaParams& params, double p);

}  // namespace dpgp
