#include "dpgp/baseline.hpp"

#include "dpgp/error.hpp"
#include "dpgp/hmc.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace dpgp {

namespace {

Eigen::MatrixXd design(const Eigen::MatrixXd& inputs) {
  Eigen::MatrixXd x(inputs.rows(), inputs.cols() + 1);
  x.col(0).setOnes();
  x.rightCols(inputs.cols()) = inputs;
  return x;
}

double objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w, double ridge) {
  const Eigen::VectorXd eta = x * w;
  double v = 0.5 * ridge * w.squaredNorm();
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    v += softplus(eta(i)) - y(i) * eta(i);
  return v;
}

}  // namespace

void LogRegOptions::validate() const {
  if (max_iter < 1) throw ValidationError("logreg max_iter must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("logreg tol must be > 0");
  if (!(ridge >= 0.0) || !std::isfinite(ridge))
    throw ValidationError("logreg ridge must be finite and >= 0");
}

double logreg_objective(const Eigen::MatrixXd& inputs,
                        const Eigen::VectorXd& labels,
                        const Eigen::VectorXd& weights, double ridge) {
  return objective(design(inputs), labels, weights, ridge);
}

LogRegModel fit_logreg(const Eigen::MatrixXd& inputs,
                       const Eigen::VectorXd& labels,
                       const LogRegOptions& options) {
  options.validate();
  if (inputs.rows() != labels.size())
    throw ValidationError("inputs and labels differ in length");
  if (!(labels.array() == 0.0).any() || !(labels.array() == 1.0).any())
    throw ValidationError("logistic regression needs both classes");

  // Optional standardization; weights are mapped back at the end.
  const Eigen::Index d = inputs.cols();
  Eigen::RowVectorXd center = Eigen::RowVectorXd::Zero(d);
  Eigen::RowVectorXd scale = Eigen::RowVectorXd::Ones(d);
  Eigen::MatrixXd z = inputs;
  if (options.standardize) {
    center = inputs.colwise().mean();
    for (Eigen::Index k = 0; k < d; ++k) {
      const double sd = std::sqrt(
          (inputs.col(k).array() - center(k)).square().mean());
      scale(k) = sd > 0.0 ? sd : 1.0;
    }
    z = (inputs.rowwise() - center).array().rowwise() / scale.array();
  }

  const Eigen::MatrixXd x = design(z);
  const Eigen::VectorXd& y = labels;
  const Eigen::Index p = x.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  double current = objective(x, y, w, options.ridge);

  LogRegModel model;
  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd eta = x * w;
    Eigen::VectorXd mu(eta.size()), wts(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      mu(i) = sigmoid(eta(i));
      wts(i) = mu(i) * (1.0 - mu(i));
    }
    const Eigen::VectorXd grad = x.transpose() * (mu - y) + options.ridge * w;
    model.gradient_norm = grad.norm();
    if (model.gradient_norm <= options.tol) {
      model.converged = true;
      break;
    }
    Eigen::MatrixXd hess = x.transpose() * wts.asDiagonal() * x;
    hess.diagonal().array() += options.ridge;
    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    if (!step.allFinite()) break;

    double t = 1.0;
    Eigen::VectorXd candidate = w - step;
    double value = objective(x, y, candidate, options.ridge);
    int halvings = 0;
    while (!(value <= current) && halvings < 60) {
      t *= 0.5;
      candidate = w - t * step;
      value = objective(x, y, candidate, options.ridge);
      ++halvings;
    }
    model.iterations = iter + 1;
    if (!(value <= current)) break;  // no descent possible at this precision
    w = std::move(candidate);
    current = value;
  }
  if (!model.converged) {
    const Eigen::VectorXd eta = x * w;
    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = sigmoid(eta(i));
    model.gradient_norm = (x.transpose() * (mu - y) + options.ridge * w).norm();
    model.converged = model.gradient_norm <= options.tol;
  }

  model.weights.resize(p);
  model.weights.tail(d) = w.tail(d).array() / scale.transpose().array();
  model.weights(0) = w(0) - (model.weights.tail(d).transpose() * center.transpose())(0);
  return model;
}

LogRegModel fit_logreg(const Dataset& train, const LogRegOptions& options) {
  return fit_logreg(train.inputs(), train.labels(), options);
}

Eigen::VectorXd predict_logreg(const LogRegModel& model,
                               const Eigen::MatrixXd& inputs) {
  if (model.weights.size() != inputs.cols() + 1)
    throw ValidationError("model dimension does not match the inputs");
  Eigen::VectorXd eta = inputs * model.weights.tail(inputs.cols());
  eta.array() += model.weights(0);
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta(i) = sigmoid(eta(i));
  return eta;
}

}  // namespace dpgp
