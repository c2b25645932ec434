#include "dpgp/gp.hpp"

#include "dpgp/error.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

namespace dpgp {

void GpConfig::validate() const {
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
    throw ValidationError("signal_variance must be finite and > 0");
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale))
    throw ValidationError("lengthscale must be finite and > 0");
  if (!(jitter >= 0.0) || !std::isfinite(jitter))
    throw ValidationError("jitter must be finite and >= 0");
  if (!std::isfinite(mean)) throw ValidationError("mean must be finite");
}

double kernel(const Eigen::Ref<const Eigen::RowVectorXd>& x,
              const Eigen::Ref<const Eigen::RowVectorXd>& x2,
              const GpConfig& cfg, bool same_index) {
  const double d2 = (x - x2).squaredNorm();
  double k = cfg.signal_variance *
             std::exp(-d2 / (2.0 * cfg.lengthscale * cfg.lengthscale));
  if (same_index) k += cfg.jitter;
  return k;
}

Eigen::MatrixXd cross_covariance(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const GpConfig& cfg) {
  if (a.cols() != b.cols())
    throw ValidationError("input dimension mismatch in cross_covariance");
  const double inv = 1.0 / (2.0 * cfg.lengthscale * cfg.lengthscale);
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      k(i, j) = cfg.signal_variance *
                std::exp(-(a.row(i) - b.row(j)).squaredNorm() * inv);
  return k;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& x, const GpConfig& cfg) {
  Eigen::MatrixXd k = cross_covariance(x, x, cfg);
  k.diagonal().array() += cfg.jitter;
  return k;
}

JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& sym,
                                   double initial_diagonal) {
  double d = std::max(initial_diagonal, kJitterFloor);
  for (;;) {
    Eigen::MatrixXd a = sym;
    a.diagonal().array() += d;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd l = llt.matrixL();
      if ((l.diagonal().array() > 0.0).all() && l.allFinite())
        return {std::move(l), d};
    }
    if (d >= kJitterCeiling * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "Cholesky factorization failed; last jitter tried " << d;
      throw NumericalError(msg.str());
    }
    d = std::min(d * 10.0, kJitterCeiling);
  }
}

CholeskyGram::CholeskyGram(Eigen::MatrixXd inputs, Eigen::MatrixXd lower,
                           double jitter_used, GpConfig cfg)
    : inputs_(std::move(inputs)),
      lower_(std::move(lower)),
      jitter_used_(jitter_used),
      cfg_(cfg) {}

Eigen::MatrixXd CholeskyGram::solve_lower(const Eigen::MatrixXd& rhs) const {
  return lower_.triangularView<Eigen::Lower>().solve(rhs);
}

Eigen::MatrixXd CholeskyGram::solve(const Eigen::MatrixXd& rhs) const {
  Eigen::MatrixXd z = solve_lower(rhs);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(z);
}

CholeskyGram gram(const Eigen::MatrixXd& inputs, const GpConfig& cfg) {
  cfg.validate();
  // Zero inputs is allowed: conditionals then reduce to the prior.
  if (inputs.rows() == 0) return CholeskyGram(inputs, Eigen::MatrixXd(0, 0), 0.0, cfg);
  if (!inputs.allFinite()) throw ValidationError("inputs must be finite");
  // The nugget enters through the jitter escalation, never twice.
  Eigen::MatrixXd k = cross_covariance(inputs, inputs, cfg);
  auto fac = jittered_cholesky(k, cfg.jitter);
  return CholeskyGram(inputs, std::move(fac.lower), fac.diagonal, cfg);
}

Eigen::MatrixXd conditional_means(const Eigen::MatrixXd& f_train,
                                  const Eigen::MatrixXd& test_inputs,
                                  const CholeskyGram& chol) {
  if (f_train.rows() != chol.size())
    throw ValidationError("f_train length does not match the Gram matrix");
  if (test_inputs.rows() > 0 && test_inputs.cols() != chol.inputs().cols())
    throw ValidationError("test input dimension mismatch");
  const double mean = chol.config().mean;
  if (test_inputs.rows() == 0) return Eigen::MatrixXd(0, f_train.cols());
  const Eigen::MatrixXd kstar =
      cross_covariance(chol.inputs(), test_inputs, chol.config());
  Eigen::MatrixXd centered = f_train.array() - mean;
  Eigen::MatrixXd weights = chol.solve(centered);
  Eigen::MatrixXd out = kstar.transpose() * weights;
  out.array() += mean;
  return out;
}

GpConditional conditional(const Eigen::VectorXd& f_train,
                          const Eigen::MatrixXd& test_inputs,
                          const CholeskyGram& chol) {
  if (f_train.size() != chol.size())
    throw ValidationError("f_train length does not match the Gram matrix");
  if (test_inputs.rows() > 0 && test_inputs.cols() != chol.inputs().cols())
    throw ValidationError("test input dimension mismatch");
  GpConditional out;
  if (test_inputs.rows() == 0) {
    out.mean.resize(0);
    out.cov.resize(0, 0);
    return out;
  }
  const GpConfig& cfg = chol.config();
  const Eigen::MatrixXd kstar = cross_covariance(chol.inputs(), test_inputs, cfg);
  const Eigen::MatrixXd v = chol.solve_lower(kstar);
  const Eigen::VectorXd centered = f_train.array() - cfg.mean;
  const Eigen::VectorXd w = chol.solve(centered);
  out.mean = kstar.transpose() * w;
  out.mean.array() += cfg.mean;
  out.cov = cross_covariance(test_inputs, test_inputs, cfg);
  out.cov.noalias() -= v.transpose() * v;
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  for (Eigen::Index i = 0; i < out.cov.rows(); ++i)
    out.cov(i, i) = std::max(out.cov(i, i), 0.0);
  return out;
}

}  // namespace dpgp
