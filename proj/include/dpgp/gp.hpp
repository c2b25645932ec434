#pragma once

// Squared-exponential Gaussian process: kernel, Gram factorization and
// noise-free conditional distributions.
//
// The nugget term jitter * delta(x, x') is applied by *index identity*: it is
// added to the diagonal of a Gram matrix built from one input set, and never
// to a cross-covariance between two different input sets, even when two
// points happen to share coordinates.

#include <Eigen/Core>

namespace dpgp {

struct GpConfig {
  double signal_variance = 1.0;
  double lengthscale = 1.0;
  double jitter = 1e-6;
  double mean = 0.0;

  void validate() const;
};

/// Smallest diagonal term ever used in a factorization.
inline constexpr double kJitterFloor = 1e-8;
/// Largest diagonal term tried before giving up.
inline constexpr double kJitterCeiling = 1e-2;

/// sigma^2 exp(-|x - x'|^2 / (2 l^2)); `same_index` adds the nugget.
double kernel(const Eigen::Ref<const Eigen::RowVectorXd>& x,
              const Eigen::Ref<const Eigen::RowVectorXd>& x2,
              const GpConfig& cfg, bool same_index = false);

/// K(A, B) without any nugget.
Eigen::MatrixXd cross_covariance(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const GpConfig& cfg);

/// K(X, X) + jitter * I.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& x, const GpConfig& cfg);

/// Lower Cholesky factor of a symmetric matrix after adding `diag` * I,
/// escalating the diagonal by x10 from max(initial, 1e-8) up to 1e-2.
/// Returns the factor and the diagonal term that succeeded.
struct JitteredCholesky {
  Eigen::MatrixXd lower;
  double diagonal = 0.0;
};
JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& sym,
                                   double initial_diagonal);

/// Factorized K(X, X) + jitter * I for a fixed set of training inputs.
class CholeskyGram {
 public:
  CholeskyGram() = default;
  CholeskyGram(Eigen::MatrixXd inputs, Eigen::MatrixXd lower,
               double jitter_used, GpConfig cfg);

  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::MatrixXd& lower() const { return lower_; }
  /// Diagonal term that made the factorization succeed.
  double jitter_used() const { return jitter_used_; }
  const GpConfig& config() const { return cfg_; }
  Eigen::Index size() const { return lower_.rows(); }

  /// (L L^T)^{-1} rhs through two triangular solves.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  /// L^{-1} rhs.
  Eigen::MatrixXd solve_lower(const Eigen::MatrixXd& rhs) const;

 private:
  Eigen::MatrixXd inputs_;
  Eigen::MatrixXd lower_;
  double jitter_used_ = 0.0;
  GpConfig cfg_;
};

/// Factorizes K(X, X) + max(jitter, 1e-8) I with the escalation policy of
/// jittered_cholesky. Throws NumericalError naming the last jitter tried.
CholeskyGram gram(const Eigen::MatrixXd& inputs, const GpConfig& cfg);

struct GpConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Distribution of f(test) given f(train) = f_train under the prior
/// GP(mean, K). Covariance diagonal is clamped at 0.
GpConditional conditional(const Eigen::VectorXd& f_train,
                          const Eigen::MatrixXd& test_inputs,
                          const CholeskyGram& chol);

/// Conditional means for several training vectors at once; column s of
/// `f_train` is one vector, column s of the result its conditional mean.
Eigen::MatrixXd conditional_means(const Eigen::MatrixXd& f_train,
                                  const Eigen::MatrixXd& test_inputs,
                                  const CholeskyGram& chol);

}  // namespace dpgp
