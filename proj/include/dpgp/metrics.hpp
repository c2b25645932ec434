#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace dpgp {

struct MetricsReport {
  double auc = 0.0;
  double brier = 0.0;
  double logloss = 0.0;
  std::size_t n_test = 0;
};

inline constexpr double kDefaultLogLossClip = 1e-12;

/// Mann-Whitney AUC from average ranks; tied scores get half credit.
/// Throws ValidationError if `y` holds a single class.
double auc(const Eigen::VectorXd& p, const Eigen::VectorXd& y);
double brier(const Eigen::VectorXd& p, const Eigen::VectorXd& y);
/// Probabilities are clipped to [clip, 1 - clip].
double logloss(const Eigen::VectorXd& p, const Eigen::VectorXd& y,
               double clip = kDefaultLogLossClip);

MetricsReport evaluate(const Eigen::VectorXd& p, const Eigen::VectorXd& y);

}  // namespace dpgp
