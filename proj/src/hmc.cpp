#include "dpgp/hmc.hpp"

#include "dpgp/error.hpp"
#include "dpgp/random.hpp"

#include <cmath>
#include <sstream>

namespace dpgp {

namespace {

constexpr std::uint64_t kHmcStream = 0x686d63ULL;

// Dual averaging constants (Hoffman & Gelman 2014).
constexpr double kGamma = 0.05;
constexpr double kT0 = 10.0;
constexpr double kKappa = 0.75;

class DualAveraging {
 public:
  DualAveraging(double initial_step, double target)
      : mu_(std::log(10.0 * initial_step)), target_(target) {}

  double update(double accept_prob) {
    ++t_;
    const double t = static_cast<double>(t_);
    h_bar_ = (1.0 - 1.0 / (t + kT0)) * h_bar_ +
             (target_ - accept_prob) / (t + kT0);
    const double log_step = mu_ - std::sqrt(t) / kGamma * h_bar_;
    const double w = std::pow(t, -kKappa);
    log_step_bar_ = w * log_step + (1.0 - w) * log_step_bar_;
    return std::exp(log_step);
  }

  double final_step() const { return std::exp(log_step_bar_); }

 private:
  double mu_;
  double target_;
  double h_bar_ = 0.0;
  double log_step_bar_ = 0.0;
  std::size_t t_ = 0;
};

Eigen::VectorXd latent_from_whitened(const Eigen::VectorXd& eta,
                                     const CholeskyGram& chol, double mean) {
  Eigen::VectorXd f = chol.lower().triangularView<Eigen::Lower>() * eta;
  f.array() += mean;
  return f;
}

}  // namespace

void HmcConfig::validate() const {
  if (warmup < 1) throw ValidationError("hmc warmup must be >= 1");
  if (samples < 1) throw ValidationError("hmc samples must be >= 1");
  if (leapfrog_steps < 1) throw ValidationError("hmc leapfrog_steps must be >= 1");
  if (chains < 1) throw ValidationError("hmc chains must be >= 1");
  if (!(target_accept > 0.0 && target_accept < 1.0))
    throw ValidationError("hmc target_accept must lie in (0, 1)");
  if (!(initial_step_size > 0.0) || !std::isfinite(initial_step_size))
    throw ValidationError("hmc initial_step_size must be > 0");
}

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace detail {

PotentialValue potential(const Target& target, const Eigen::VectorXd& eta,
                         const CholeskyGram& chol, double mean) {
  const Eigen::Index n = chol.size();
  if (eta.size() != n) throw ValidationError("eta length mismatch");
  PotentialValue out;
  out.value = 0.5 * eta.squaredNorm();
  out.grad = eta;
  if (target.likelihood == Likelihood::prior_only) return out;
  if (target.y.size() != n) throw ValidationError("label length mismatch");

  const Eigen::VectorXd f = latent_from_whitened(eta, chol, mean);
  Eigen::VectorXd df(n);  // dU/df
  if (target.likelihood == Likelihood::bernoulli_logit) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out.value += softplus(f(i)) - target.y(i) * f(i);
      df(i) = sigmoid(f(i)) - target.y(i);
    }
  } else {
    const double inv = 1.0 / target.noise_variance;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = f(i) - target.y(i);
      out.value += 0.5 * r * r * inv;
      df(i) = r * inv;
    }
  }
  out.grad.noalias() +=
      chol.lower().transpose().triangularView<Eigen::Upper>() * df;
  return out;
}

double energy_error(const Target& target, const CholeskyGram& chol,
                    double mean, const Eigen::VectorXd& eta0,
                    const Eigen::VectorXd& momentum, double step_size,
                    std::size_t steps) {
  Eigen::VectorXd eta = eta0;
  Eigen::VectorXd p = momentum;
  auto pot = potential(target, eta, chol, mean);
  const double h0 = pot.value + 0.5 * p.squaredNorm();
  p -= 0.5 * step_size * pot.grad;
  for (std::size_t l = 0; l < steps; ++l) {
    eta += step_size * p;
    pot = potential(target, eta, chol, mean);
    if (l + 1 < steps) p -= step_size * pot.grad;
  }
  p -= 0.5 * step_size * pot.grad;
  return pot.value + 0.5 * p.squaredNorm() - h0;
}

ChainResult run_chain(const Target& target, const CholeskyGram& chol,
                      double mean, const HmcConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Eigen::Index n = chol.size();
  Rng rng(seed, {kHmcStream});

  ChainResult out;
  out.eta.resize(static_cast<Eigen::Index>(cfg.samples), n);
  out.f.resize(static_cast<Eigen::Index>(cfg.samples), n);

  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  PotentialValue current = potential(target, eta, chol, mean);
  DualAveraging adapt(cfg.initial_step_size, cfg.target_accept);
  double step = cfg.initial_step_size;
  std::size_t accepted = 0;

  Eigen::VectorXd p(n);
  const std::size_t total = cfg.warmup + cfg.samples;
  for (std::size_t iter = 0; iter < total; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) p(i) = rng.normal();
    const double h0 = current.value + 0.5 * p.squaredNorm();

    Eigen::VectorXd prop = eta;
    PotentialValue pot = current;
    p -= 0.5 * step * pot.grad;
    for (std::size_t l = 0; l < cfg.leapfrog_steps; ++l) {
      prop += step * p;
      pot = potential(target, prop, chol, mean);
      if (l + 1 < cfg.leapfrog_steps) p -= step * pot.grad;
    }
    p -= 0.5 * step * pot.grad;
    const double h1 = pot.value + 0.5 * p.squaredNorm();

    double accept_prob = 0.0;
    if (std::isfinite(h1)) accept_prob = std::min(1.0, std::exp(h0 - h1));
    const bool accept = rng.uniform() < accept_prob;
    if (accept) {
      eta = std::move(prop);
      current = std::move(pot);
    }

    if (iter < cfg.warmup) {
      step = adapt.update(accept_prob);
      if (iter + 1 == cfg.warmup) step = adapt.final_step();
    } else {
      accepted += accept;
      const auto row = static_cast<Eigen::Index>(iter - cfg.warmup);
      out.eta.row(row) = eta.transpose();
      out.f.row(row) = latent_from_whitened(eta, chol, mean).transpose();
    }
  }
  out.accept_rate =
      static_cast<double>(accepted) / static_cast<double>(cfg.samples);
  out.step_size = step;
  return out;
}

}  // namespace detail

PotentialValue potential(const Eigen::VectorXd& eta, const Eigen::VectorXd& y,
                         const CholeskyGram& chol, double mean) {
  detail::Target target{detail::Likelihood::bernoulli_logit, y, 1.0};
  return detail::potential(target, eta, chol, mean);
}

LatentPosterior sample(const Eigen::VectorXd& y, const CholeskyGram& chol,
                       double mean, const HmcConfig& cfg) {
  cfg.validate();
  if (y.size() != chol.size())
    throw ValidationError("label vector length does not match the Gram matrix");
  const bool has0 = (y.array() == 0.0).any();
  const bool has1 = (y.array() == 1.0).any();
  if (!has0 || !has1) throw ValidationError("labels must contain both classes");
  if (((y.array() != 0.0) && (y.array() != 1.0)).any())
    throw ValidationError("labels must be 0 or 1");

  detail::Target target{detail::Likelihood::bernoulli_logit, y, 1.0};
  LatentPosterior post;
  post.backend = LatentBackendKind::hmc;
  post.chol = chol;
  post.draws.resize(static_cast<Eigen::Index>(cfg.samples * cfg.chains),
                    chol.size());
  double accept_sum = 0.0;
  for (std::size_t c = 0; c < cfg.chains; ++c) {
    const std::uint64_t seed =
        cfg.chains == 1 ? cfg.seed : derive_seed(cfg.seed, {c});
    auto chain = detail::run_chain(target, chol, mean, cfg, seed);
    if (chain.accept_rate < kMinAcceptRate) {
      std::ostringstream msg;
      msg << "HMC chain " << c << " diverged: post-warmup acceptance rate "
          << chain.accept_rate << " < " << kMinAcceptRate
          << " (adapted step size " << chain.step_size << ", "
          << cfg.leapfrog_steps << " leapfrog steps)";
      throw NumericalError(msg.str());
    }
    post.draws.middleRows(static_cast<Eigen::Index>(c * cfg.samples),
                          static_cast<Eigen::Index>(cfg.samples)) = chain.f;
    post.chain_accept_rates.push_back(chain.accept_rate);
    post.chain_step_sizes.push_back(chain.step_size);
    accept_sum += chain.accept_rate;
  }
  post.accept_rate = accept_sum / static_cast<double>(cfg.chains);
  return post;
}

}  // namespace dpgp
