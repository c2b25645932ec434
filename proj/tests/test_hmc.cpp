#include "dpgp/dataset.hpp"
#include "dpgp/error.hpp"
#include "dpgp/hmc.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

using namespace dpgp;
using dpgp::testing::batch_means_se;
using dpgp::testing::random_inputs;
using dpgp::testing::random_normal;

namespace {

Eigen::VectorXd random_labels(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = rng.uniform() < 0.5 ? 0.0 : 1.0;
  y(0) = 0.0;
  y(1) = 1.0;
  return y;
}

}  // namespace

TEST_CASE("potential at the origin is n ln 2") {
  const CholeskyGram g = gram(random_inputs(12, 2, 1), GpConfig{});
  const auto pv = potential(Eigen::VectorXd::Zero(12), random_labels(12, 2), g, 0.0);
  CHECK(pv.value == doctest::Approx(12.0 * std::numbers::ln2).epsilon(1e-14));
}

TEST_CASE("potential gradient matches central finite differences") {
  GpConfig cfg{1.5, 0.8, 1e-6, 0.2};
  const Eigen::Index n = 15;
  const CholeskyGram g = gram(random_inputs(n, 2, 3), cfg);
  const Eigen::VectorXd y = random_labels(n, 4);
  const double h = 1e-5;
  for (int point = 0; point < 20; ++point) {
    const Eigen::VectorXd eta = random_normal(n, 100 + point);
    const auto pv = potential(eta, y, g, cfg.mean);
    Eigen::VectorXd fd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd up = eta, down = eta;
      up(i) += h;
      down(i) -= h;
      fd(i) = (potential(up, y, g, cfg.mean).value -
               potential(down, y, g, cfg.mean).value) / (2.0 * h);
    }
    CHECK((pv.grad - fd).norm() / fd.norm() <= 1e-5);
  }
}

TEST_CASE("likelihood gradient vanishes when y equals sigmoid(f)") {
  const Eigen::Index n = 10;
  const CholeskyGram g = gram(random_inputs(n, 2, 5), GpConfig{});
  const Eigen::VectorXd eta = random_normal(n, 6);
  const Eigen::VectorXd f = g.lower().triangularView<Eigen::Lower>() * eta;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = sigmoid(f(i));
  const auto pv = potential(eta, y, g, 0.0);
  CHECK((pv.grad - eta).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("prior-only chain recovers N(mean, K)") {
  GpConfig cfg{1.0, 1.0, 1e-6, 0.5};
  const Eigen::Index n = 4;
  const CholeskyGram g = gram(random_inputs(n, 2, 7), cfg);
  HmcConfig hc;
  hc.warmup = 500;
  hc.samples = 4000;
  hc.leapfrog_steps = 8;
  detail::Target target{detail::Likelihood::prior_only, {}, 1.0};
  const auto chain = detail::run_chain(target, g, cfg.mean, hc, 11);
  const double s = static_cast<double>(hc.samples);

  const Eigen::VectorXd mean = chain.f.colwise().mean();
  for (Eigen::Index i = 0; i < n; ++i)
    CHECK(std::abs(mean(i) - cfg.mean) <= 3.0 * cfg.signal_variance / std::sqrt(s));

  const Eigen::MatrixXd centered = chain.f.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / (s - 1.0);
  const Eigen::MatrixXd k = g.lower() * g.lower().transpose();
  CHECK((cov - k).cwiseAbs().maxCoeff() <=
        5.0 * std::sqrt(2.0 / s) * cfg.signal_variance);
}

TEST_CASE("gaussian-likelihood chain matches the conjugate posterior") {
  GpConfig cfg{1.0, 0.8, 1e-6, 0.0};
  const Eigen::Index n = 6;
  const double tau2 = 0.25;
  const Eigen::MatrixXd x = random_inputs(n, 2, 12);
  const CholeskyGram g = gram(x, cfg);
  const Eigen::VectorXd yc = random_normal(n, 13);

  // Closed form: mean K (K + tau2 I)^{-1} y, cov K - K (K + tau2 I)^{-1} K,
  // with K the same jittered Gram matrix the sampler uses.
  const Eigen::MatrixXd k = g.lower() * g.lower().transpose();
  Eigen::MatrixXd a = k;
  a.diagonal().array() += tau2;
  const Eigen::MatrixXd ainv = a.inverse();
  const Eigen::VectorXd post_mean = k * ainv * yc;
  const Eigen::MatrixXd post_cov = k - k * ainv * k;

  HmcConfig hc;
  hc.warmup = 1000;
  hc.samples = 10000;
  hc.leapfrog_steps = 16;
  detail::Target target{detail::Likelihood::gaussian, yc, tau2};
  const auto chain = detail::run_chain(target, g, 0.0, hc, 21);

  const Eigen::VectorXd mean = chain.f.colwise().mean();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double se = batch_means_se(chain.f.col(i));
    CHECK(std::abs(mean(i) - post_mean(i)) <= 4.0 * se);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Eigen::VectorXd prod = ((chain.f.col(i).array() - post_mean(i)) *
                                    (chain.f.col(j).array() - post_mean(j))).matrix();
      const double se = batch_means_se(prod);
      CHECK(std::abs(prod.mean() - post_cov(i, j)) <= 4.0 * se);
    }
}

TEST_CASE("sampler is bit-reproducible and whitening is consistent") {
  GpConfig cfg{1.0, 1.0, 1e-6, 0.25};
  const Dataset d = make_moons(40, 0.3, 3);
  const CholeskyGram g = gram(d.inputs(), cfg);
  HmcConfig hc;
  hc.warmup = 100;
  hc.samples = 50;
  hc.seed = 77;
  const auto a = sample(d.labels(), g, cfg.mean, hc);
  const auto b = sample(d.labels(), g, cfg.mean, hc);
  CHECK((a.draws.array() == b.draws.array()).all());
  CHECK(a.draws.allFinite());
  CHECK(a.num_draws() == 50);
  hc.seed = 78;
  const auto c = sample(d.labels(), g, cfg.mean, hc);
  CHECK((a.draws.array() != c.draws.array()).any());

  detail::Target target{detail::Likelihood::bernoulli_logit, d.labels(), 1.0};
  const auto chain = detail::run_chain(target, g, cfg.mean, hc, 5);
  Eigen::MatrixXd centered = chain.f.transpose().array() - cfg.mean;
  const Eigen::MatrixXd eta = g.solve_lower(centered);
  CHECK((eta - chain.eta.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("multiple chains concatenate with per-chain diagnostics") {
  const Dataset d = make_moons(30, 0.3, 4);
  const CholeskyGram g = gram(d.inputs(), GpConfig{});
  HmcConfig hc;
  hc.warmup = 50;
  hc.samples = 20;
  hc.chains = 3;
  const auto post = sample(d.labels(), g, 0.0, hc);
  CHECK(post.num_draws() == 60);
  CHECK(post.chain_accept_rates.size() == 3);
  CHECK(post.chain_step_sizes.size() == 3);
}

TEST_CASE("leapfrog conserves energy at small step sizes") {
  GpConfig cfg{1.0, 1.0, 1e-6, 0.0};
  const Dataset d = make_moons(200, 0.3, 42);
  const CholeskyGram g = gram(d.inputs(), cfg);
  HmcConfig hc;
  hc.warmup = 200;
  hc.samples = 10;
  detail::Target target{detail::Likelihood::bernoulli_logit, d.labels(), 1.0};
  const auto chain = detail::run_chain(target, g, 0.0, hc, 8);
  for (int k = 0; k < 10; ++k) {
    const Eigen::VectorXd eta = chain.eta.row(k).transpose();
    const Eigen::VectorXd p = random_normal(g.size(), 500 + k);
    const double dh =
        detail::energy_error(target, g, 0.0, eta, p, chain.step_size * 0.01, 3);
    CHECK(std::abs(dh) <= 1e-3);
  }
}

TEST_CASE("divergent sampler is reported") {
  const Dataset d = make_moons(30, 0.3, 4);
  const CholeskyGram g = gram(d.inputs(), GpConfig{});
  HmcConfig hc;
  hc.warmup = 1;
  hc.samples = 30;
  hc.initial_step_size = 50.0;
  CHECK_THROWS_AS(sample(d.labels(), g, 0.0, hc), NumericalError);
}

TEST_CASE("sample input validation") {
  const Dataset d = make_moons(10, 0.3, 4);
  const CholeskyGram g = gram(d.inputs(), GpConfig{});
  HmcConfig hc;
  CHECK_THROWS_AS(sample(Eigen::VectorXd::Zero(10), g, 0.0, hc), ValidationError);
  CHECK_THROWS_AS(sample(Eigen::VectorXd::Ones(9), g, 0.0, hc), ValidationError);
  hc.samples = 0;
  CHECK_THROWS_AS(sample(d.labels(), g, 0.0, hc), ValidationError);
}

TEST_CASE("moons training set: post-warmup acceptance near the target") {
  GpConfig cfg{1.0, 1.0, 1e-6, 0.0};
  const Dataset data = make_moons(1000, 0.3, 42);
  const SplitDataset parts = split(data, 0.7, 42);
  const CholeskyGram g = gram(parts.train.inputs(), cfg);
  HmcConfig hc;  // defaults: 1000 warmup + 1000 samples
  hc.seed = 1;
  const auto post = sample(parts.train.labels(), g, 0.0, hc);
  MESSAGE("acceptance rate " << post.accept_rate);
  CHECK(post.accept_rate >= 0.6);
  CHECK(post.accept_rate <= 0.95);
}
