#pragma once

// Logistic regression with a linear predictor, fitted by IRLS.

#include "dpgp/dataset.hpp"

#include <Eigen/Core>

#include <cstddef>

namespace dpgp {

struct LogRegOptions {
  std::size_t max_iter = 100;
  double tol = 1e-8;
  double ridge = 1e-8;
  bool standardize = false;

  void validate() const;
};

struct LogRegModel {
  Eigen::VectorXd weights;  // intercept first, in the original input scale
  bool converged = false;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
};

/// Newton-Raphson / IRLS on the negative log-likelihood plus
/// 0.5 * ridge * |w|^2 (intercept included). A step that increases the
/// objective is halved until it does not.
LogRegModel fit_logreg(const Eigen::MatrixXd& inputs,
                       const Eigen::VectorXd& labels,
                       const LogRegOptions& options = {});
LogRegModel fit_logreg(const Dataset& train, const LogRegOptions& options = {});

/// Penalized negative log-likelihood at `weights` (intercept first).
double logreg_objective(const Eigen::MatrixXd& inputs,
                        const Eigen::VectorXd& labels,
                        const Eigen::VectorXd& weights, double ridge);

Eigen::VectorXd predict_logreg(const LogRegModel& model,
                               const Eigen::MatrixXd& inputs);

}  // namespace dpgp
