#include "dpgp/dp_link.hpp"

#include "dpgp/error.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpgp {

namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Beta parameters must stay strictly positive even when the logistic CDF
// underflows far in a tail.
double positive(double x) {
  return std::max(x, std::numeric_limits<double>::min());
}

}  // namespace

void DpLinkConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("alpha must be finite and > 0");
  if (!(base_scale > 0.0) || !std::isfinite(base_scale))
    throw ValidationError("base_scale must be finite and > 0");
  if (!std::isfinite(base_location))
    throw ValidationError("base_location must be finite");
}

double base_cdf(double t, const DpLinkConfig& cfg) {
  return logistic((t - cfg.base_location) / cfg.base_scale);
}

double base_survival(double t, const DpLinkConfig& cfg) {
  return logistic(-(t - cfg.base_location) / cfg.base_scale);
}

LinkPosterior::LinkPosterior(const DpLinkConfig& cfg,
                             std::span<const double> anchors)
    : cfg_(cfg), anchors_(anchors.begin(), anchors.end()) {
  cfg_.validate();
  for (double a : anchors_)
    if (!std::isfinite(a)) throw ValidationError("anchors must be finite");
  std::sort(anchors_.begin(), anchors_.end());
}

LinkPosterior::LinkPosterior(const DpLinkConfig& cfg,
                             const Eigen::Ref<const Eigen::RowVectorXd>& anchors)
    : LinkPosterior(cfg, [&] {
        std::vector<double> v(static_cast<std::size_t>(anchors.size()));
        for (Eigen::Index i = 0; i < anchors.size(); ++i)
          v[static_cast<std::size_t>(i)] = anchors(i);
        return v;
      }()) {}

std::size_t LinkPosterior::count_leq(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(anchors_.begin(), anchors_.end(), t) - anchors_.begin());
}

double LinkPosterior::ferguson_mean(double t) const {
  const double m = static_cast<double>(count_leq(t));
  const double n = static_cast<double>(anchors_.size());
  return (cfg_.alpha * base_cdf(t, cfg_) + m) / (cfg_.alpha + n);
}

BetaParams LinkPosterior::beta_params(double t) const {
  const double m = static_cast<double>(count_leq(t));
  const double n = static_cast<double>(anchors_.size());
  return {positive(cfg_.alpha * base_cdf(t, cfg_) + m),
          positive(cfg_.alpha * base_survival(t, cfg_) + (n - m))};
}

double LinkPosterior::sample_g(double t, Rng& rng) const {
  const auto p = beta_params(t);
  return rng.beta(p.a, p.b);
}

double beta_quantile(const BetaParams& params, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("beta quantile probability must lie in [0, 1]");
  return boost::math::ibeta_inv(params.a, params.b, p);
}

}  // namespace dpgp
