#include "dpgp/dp_link.hpp"
#include "dpgp/error.hpp"

#include "doctest.h"

#include <cmath>
#include <type_traits>
#include <vector>

using namespace dpgp;

namespace {

LinkPosterior link(std::vector<double> anchors, double alpha = 1.0) {
  return LinkPosterior(DpLinkConfig{alpha, 0.0, 1.0}, anchors);
}

}  // namespace

TEST_CASE("base_cdf values") {
  const DpLinkConfig cfg;
  CHECK(base_cdf(0.0, cfg) == 0.5);
  CHECK(base_cdf(800.0, cfg) == 1.0);
  CHECK(base_cdf(-800.0, cfg) == 0.0);
  CHECK(base_cdf(std::log(3.0), cfg) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(base_cdf(1.0, DpLinkConfig{1.0, 1.0, 2.0}) == 0.5);
  CHECK(base_survival(2.0, cfg) + base_cdf(2.0, cfg) == doctest::Approx(1.0));
}

TEST_CASE("count_leq is inclusive and agrees with a linear scan") {
  const auto l = link({3.0, -2.0, 0.0});
  CHECK(l.count_leq(0.0) == 2);
  CHECK(l.count_leq(-5.0) == 0);
  CHECK(l.count_leq(10.0) == 3);

  std::vector<double> anchors{1.0, 2.0, 2.0, 2.0, 2.0, 2.0, 3.0, -1.0};
  const auto dup = link(anchors);
  for (double t : {-2.0, -1.0, 0.0, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
    std::size_t scan = 0;
    for (double a : anchors) scan += (a <= t);
    CHECK(dup.count_leq(t) == scan);
  }
  CHECK(dup.count_leq(2.0) == 7);
}

TEST_CASE("ferguson_mean examples") {
  CHECK(link({-1.0, 1.0}).ferguson_mean(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(link({-2.0, 0.0, 3.0}).ferguson_mean(0.0) == doctest::Approx(0.625).epsilon(1e-15));
  const auto empty = link({});
  for (double t : {-3.0, 0.0, 0.7}) CHECK(empty.ferguson_mean(t) == base_cdf(t, DpLinkConfig{}));
}

TEST_CASE("beta_params examples and identities") {
  const auto l = link({-2.0, 0.0, 3.0});
  const auto p = l.beta_params(0.0);
  CHECK(p.a == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(p.b == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(p.mean() == doctest::Approx(0.625).epsilon(1e-15));

  const auto prior = link({}).beta_params(0.0);
  CHECK(prior.a == 0.5);
  CHECK(prior.b == 0.5);

  for (double t = -6.0; t <= 6.0; t += 0.37) {
    const auto q = l.beta_params(t);
    CHECK(std::abs(q.a + q.b - 4.0) <= 1e-12);
    CHECK(q.a > 0.0);
    CHECK(q.b > 0.0);
  }
  // Far tails keep both parameters strictly positive.
  const auto lo = l.beta_params(-1e4);
  const auto hi = l.beta_params(1e4);
  CHECK(lo.a > 0.0);
  CHECK(hi.b > 0.0);
}

TEST_CASE("monotonicity and range") {
  const auto l = link({-1.2, 0.3, 0.3, 2.0, 5.0}, 2.0);
  double prev = -1.0;
  for (double t = -10.0; t <= 10.0; t += 0.01) {
    const double v = l.ferguson_mean(t);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("limits in alpha") {
  std::vector<double> anchors;
  for (int i = 0; i < 20; ++i) anchors.push_back(std::sin(i * 1.3) * 3.0);
  const auto big = link(anchors, 1e6);
  const auto small = link(anchors, 1e-6);
  const double n = 20.0;
  for (double t = -5.0; t <= 5.0; t += 0.05) {
    CHECK(std::abs(big.ferguson_mean(t) - base_cdf(t, DpLinkConfig{})) <= 2.0 * n / 1e6);
    CHECK(std::abs(small.ferguson_mean(t) - small.count_leq(t) / n) <= 1e-6);
  }
}

TEST_CASE("link posterior is built from latent anchors only") {
  // The constructor admits a config and latent values; there is no way to
  // pass class labels.
  CHECK(std::is_constructible_v<LinkPosterior, DpLinkConfig, std::span<const double>>);
  CHECK_FALSE(std::is_default_constructible_v<LinkPosterior>);
  CHECK_THROWS_AS(link({0.0, std::nan("")}), ValidationError);
  CHECK_THROWS_AS((LinkPosterior(DpLinkConfig{0.0, 0.0, 1.0}, std::vector<double>{})),
                  ValidationError);
}

TEST_CASE("sample_g: symmetric Beta(a, a)") {
  // anchors {-1, 1} at t = 0: a = 0.5 + 1, b = 0.5 + 1.
  const auto l = link({-1.0, 1.0});
  Rng rng(3);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += l.sample_g(0.0, rng);
  CHECK(std::abs(sum / n - 0.5) <= 0.005);
}

TEST_CASE("sample_g: moments match the analytic Beta") {
  std::vector<double> anchors;
  for (int i = 0; i < 200; ++i) anchors.push_back(-1.0 - 0.01 * i);
  const auto l = link(anchors);
  for (double t : {0.0, -1.5}) {
    const auto bp = l.beta_params(t);
    Rng rng(5);
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = l.sample_g(t, rng);
      CHECK((g >= 0.0 && g <= 1.0));
      s += g;
      s2 += g * g;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    const double sd = std::sqrt(bp.variance());
    CHECK(std::abs(mean - bp.mean()) <= 3.0 * sd / std::sqrt(n));
    // Standard error of the sample variance ~ var * sqrt(2 / n) (plus
    // excess kurtosis, small here).
    CHECK(std::abs(var - bp.variance()) <= 3.0 * bp.variance() * std::sqrt(3.0 / n));
  }
  // m = n concentrates near 1.
  CHECK(l.beta_params(0.0).mean() > 0.99);
}

TEST_CASE("beta quantiles match scipy reference values") {
  CHECK(beta_quantile({2.5, 1.5}, 0.025) == doctest::Approx(0.17673609713125732).epsilon(1e-10));
  CHECK(beta_quantile({2.5, 1.5}, 0.975) == doctest::Approx(0.9612523822148348).epsilon(1e-10));
  CHECK(beta_quantile({0.3, 700.7}, 0.05) == doctest::Approx(4.584899518642022e-08).epsilon(1e-8));
  CHECK(beta_quantile({0.3, 700.7}, 0.95) == doctest::Approx(0.0019576012430457656).epsilon(1e-10));
  CHECK(beta_quantile({350.5, 350.5}, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(beta_quantile({40.2, 10.8}, 0.1) == doctest::Approx(0.7130947664448339).epsilon(1e-10));
}
