#include "dpgp/latent.hpp"

#include "dpgp/error.hpp"
#include "dpgp/random.hpp"

#include <cmath>

namespace dpgp {

namespace {

constexpr std::uint64_t kLatentStream = 0x6c6174656e74ULL;

LatentPosterior fit_analytic(const Eigen::MatrixXd& inputs,
                             const Eigen::VectorXd& labels,
                             const GpConfig& gp_cfg, double tau2) {
  const Eigen::MatrixXd k = cross_covariance(inputs, inputs, gp_cfg);
  const auto fac = jittered_cholesky(k, tau2);
  Eigen::VectorXd centered = (2.0 * labels.array() - 1.0) - gp_cfg.mean;
  const auto lower = fac.lower.triangularView<Eigen::Lower>();
  lower.solveInPlace(centered);
  fac.lower.transpose().triangularView<Eigen::Upper>().solveInPlace(centered);
  Eigen::VectorXd f_hat = k * centered;
  f_hat.array() += gp_cfg.mean;

  LatentPosterior post;
  post.backend = LatentBackendKind::analytic;
  post.chol = gram(inputs, gp_cfg);
  post.draws = f_hat.transpose();
  post.accept_rate = 1.0;
  return post;
}

}  // namespace

void LatentBackend::validate() const {
  if (kind == LatentBackendKind::hmc) {
    hmc.validate();
  } else if (!(surrogate_noise > 0.0) || !std::isfinite(surrogate_noise)) {
    throw ValidationError("surrogate_noise must be finite and > 0");
  }
}

LatentBackendKind parse_backend_kind(std::string_view name) {
  if (name == "hmc") return LatentBackendKind::hmc;
  if (name == "analytic") return LatentBackendKind::analytic;
  throw ValidationError("unknown backend '" + std::string(name) +
                        "' (expected hmc or analytic)");
}

std::string_view to_string(LatentBackendKind kind) {
  return kind == LatentBackendKind::hmc ? "hmc" : "analytic";
}

LatentPosterior fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& labels,
                    const GpConfig& gp_cfg, const LatentBackend& backend) {
  gp_cfg.validate();
  backend.validate();
  if (inputs.rows() != labels.size())
    throw ValidationError("inputs and labels differ in length");
  if (!(labels.array() == 0.0).any() || !(labels.array() == 1.0).any())
    throw ValidationError("training data must contain both classes");
  if (backend.kind == LatentBackendKind::analytic)
    return fit_analytic(inputs, labels, gp_cfg, backend.surrogate_noise);
  const CholeskyGram chol = gram(inputs, gp_cfg);
  return sample(labels, chol, gp_cfg.mean, backend.hmc);
}

LatentPosterior fit(const Dataset& train, const GpConfig& gp_cfg,
                    const LatentBackend& backend) {
  return fit(train.inputs(), train.labels(), gp_cfg, backend);
}

LatentPredictor::LatentPredictor(const LatentPosterior& posterior,
                                 std::uint64_t seed)
    : posterior_(&posterior), seed_(seed) {
  const CholeskyGram& chol = posterior.chol;
  if (posterior.draws.cols() != chol.size())
    throw ValidationError(
        "posterior draws do not match the size of their Gram matrix");
  Eigen::MatrixXd centered =
      posterior.draws.transpose().array() - chol.config().mean;
  weights_ = chol.solve(centered);
}

Eigen::MatrixXd LatentPredictor::block(const Eigen::MatrixXd& block_inputs,
                                       std::uint64_t block_index) const {
  const CholeskyGram& chol = posterior_->chol;
  const GpConfig& cfg = chol.config();
  const Eigen::Index rows = block_inputs.rows();
  const Eigen::Index draws = weights_.cols();
  if (rows == 0) return Eigen::MatrixXd(draws, 0);
  if (block_inputs.cols() != chol.inputs().cols())
    throw ValidationError("test input dimension mismatch");

  const Eigen::MatrixXd kstar = cross_covariance(chol.inputs(), block_inputs, cfg);
  Eigen::MatrixXd out = weights_.transpose() * kstar;  // S x rows
  out.array() += cfg.mean;
  if (posterior_->backend == LatentBackendKind::analytic) return out;

  const Eigen::MatrixXd v = chol.solve_lower(kstar);
  Eigen::MatrixXd cov = cross_covariance(block_inputs, block_inputs, cfg);
  cov.noalias() -= v.transpose() * v;
  cov = 0.5 * (cov + cov.transpose()).eval();
  for (Eigen::Index i = 0; i < rows; ++i) cov(i, i) = std::max(cov(i, i), 0.0);
  const auto fac = jittered_cholesky(cov, 0.0);

  Eigen::MatrixXd z(rows, draws);
  for (Eigen::Index s = 0; s < draws; ++s) {
    Rng rng(seed_, {kLatentStream, static_cast<std::uint64_t>(s), block_index});
    for (Eigen::Index i = 0; i < rows; ++i) z(i, s) = rng.normal();
  }
  out.noalias() +=
      (fac.lower.triangularView<Eigen::Lower>() * z).transpose();
  return out;
}

Eigen::MatrixXd latent_at(const Eigen::MatrixXd& test_inputs,
                          const LatentPosterior& posterior, std::uint64_t seed,
                          Eigen::Index block_size) {
  if (block_size < 1) throw ValidationError("block_size must be >= 1");
  LatentPredictor predictor(posterior, seed);
  const Eigen::Index m = test_inputs.rows();
  Eigen::MatrixXd out(predictor.num_draws(), m);
  std::uint64_t b = 0;
  for (Eigen::Index start = 0; start < m; start += block_size, ++b) {
    const Eigen::Index len = std::min(block_size, m - start);
    out.middleCols(start, len) =
        predictor.block(test_inputs.middleRows(start, len), b);
  }
  return out;
}

}  // namespace dpgp
