#include "dpgp/error.hpp"
#include "dpgp/metrics.hpp"
#include "dpgp/random.hpp"

#include "doctest.h"

#include <Eigen/Core>
#include <cmath>
#include <numbers>

using namespace dpgp;

namespace {

double pairwise_auc(const Eigen::VectorXd& p, const Eigen::VectorXd& y) {
  double wins = 0.0, pairs = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (y(i) != 1.0) continue;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (y(j) != 0.0) continue;
      pairs += 1.0;
      if (p(i) > p(j)) wins += 1.0;
      else if (p(i) == p(j)) wins += 0.5;
    }
  }
  return wins / pairs;
}

void random_case(std::uint64_t seed, Eigen::Index n, Eigen::VectorXd& p,
                 Eigen::VectorXd& y, bool coarse) {
  Rng rng(seed);
  p.resize(n);
  y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Coarse values force many ties.
    p(i) = coarse ? std::floor(rng.uniform() * 5.0) / 5.0 : rng.uniform();
    y(i) = rng.uniform() < 0.4 ? 1.0 : 0.0;
  }
  y(0) = 0.0;
  y(1) = 1.0;
}

}  // namespace

TEST_CASE("auc examples") {
  Eigen::VectorXd y(6);
  y << 0, 1, 1, 0, 1, 0;
  CHECK(auc(y, y) == 1.0);
  CHECK(auc(Eigen::VectorXd::Constant(6, 0.3), y) == 0.5);
  CHECK(auc(1.0 - y.array(), y) == 0.0);
  CHECK_THROWS_AS(auc(y, Eigen::VectorXd::Ones(6)), ValidationError);
}

TEST_CASE("rank-based auc equals the pairwise oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Eigen::VectorXd p, y;
    random_case(seed, 50, p, y, seed % 2 == 1);
    CHECK(std::abs(auc(p, y) - pairwise_auc(p, y)) <= 1e-12);
  }
}

TEST_CASE("auc is invariant under increasing transforms and reordering") {
  Eigen::VectorXd p, y;
  random_case(99, 60, p, y, false);
  const double base = auc(p, y);
  CHECK(auc(p.array().cube(), y) == base);
  CHECK(auc(p.reverse(), y.reverse()) == base);
}

TEST_CASE("brier examples") {
  Eigen::VectorXd y(4);
  y << 0, 1, 1, 0;
  CHECK(brier(y, y) == 0.0);
  CHECK(brier(Eigen::VectorXd::Constant(4, 0.5), y) == 0.25);
  Eigen::Vector2d p(0.8, 0.3), y2(1.0, 0.0);
  CHECK(brier(p, y2) == doctest::Approx(0.065).epsilon(1e-15));
}

TEST_CASE("logloss examples and clipping") {
  Eigen::VectorXd y(4);
  y << 0, 1, 1, 0;
  CHECK(std::abs(logloss(Eigen::VectorXd::Constant(4, 0.5), y) - std::numbers::ln2) <= 1e-12);
  const double exact = logloss(y, y);
  CHECK(std::isfinite(exact));
  CHECK(exact == doctest::Approx(-std::log1p(-1e-12)).epsilon(1e-3));
  CHECK(std::isfinite(logloss(1.0 - y.array(), y)));
  Eigen::VectorXd p1(1), y1(1);
  p1 << 0.9;
  y1 << 1.0;
  CHECK(logloss(p1, y1) == doctest::Approx(0.10536051565782628).epsilon(1e-14));
}

TEST_CASE("constant predictors: both losses minimized at the prevalence") {
  Eigen::VectorXd y(10);
  y << 1, 0, 0, 1, 0, 0, 0, 1, 0, 0;  // prevalence 0.3
  double best_b = 1e9, arg_b = -1.0, best_l = 1e9, arg_l = -1.0;
  for (int k = 1; k < 100; ++k) {
    const double c = k / 100.0;
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(10, c);
    const double b = brier(p, y), l = logloss(p, y);
    if (b < best_b) best_b = b, arg_b = c;
    if (l < best_l) best_l = l, arg_l = c;
  }
  CHECK(arg_b == doctest::Approx(0.3));
  CHECK(arg_l == doctest::Approx(0.3));
}

TEST_CASE("evaluate bundles the three metrics") {
  Eigen::VectorXd p, y;
  random_case(5, 30, p, y, false);
  const MetricsReport r = evaluate(p, y);
  CHECK(r.n_test == 30);
  CHECK(r.auc == auc(p, y));
  CHECK(r.brier == brier(p, y));
  CHECK(r.logloss == logloss(p, y));
  CHECK(r.brier <= 1.0);
  CHECK_THROWS_AS(evaluate(p, y.head(10)), ValidationError);
  CHECK_THROWS_AS(brier(Eigen::VectorXd(0), Eigen::VectorXd(0)), ValidationError);
}
