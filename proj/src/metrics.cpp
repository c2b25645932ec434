#include "dpgp/metrics.hpp"

#include "dpgp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace dpgp {

namespace {

void check_pair(const Eigen::VectorXd& p, const Eigen::VectorXd& y) {
  if (p.size() != y.size())
    throw ValidationError("predictions and labels differ in length");
  if (p.size() == 0) throw ValidationError("metrics need at least one point");
}

}  // namespace

double auc(const Eigen::VectorXd& p, const Eigen::VectorXd& y) {
  check_pair(p, y);
  const auto n = static_cast<std::size_t>(p.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p(static_cast<Eigen::Index>(a)) < p(static_cast<Eigen::Index>(b));
  });

  double rank_sum = 0.0;
  double n_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    const double v = p(static_cast<Eigen::Index>(order[i]));
    while (j < n && p(static_cast<Eigen::Index>(order[j])) == v) ++j;
    // Ranks i+1..j share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (y(static_cast<Eigen::Index>(order[k])) == 1.0) {
        rank_sum += avg_rank;
        n_pos += 1.0;
      }
    }
    i = j;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0)
    throw ValidationError("AUC needs both classes in the labels");
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double brier(const Eigen::VectorXd& p, const Eigen::VectorXd& y) {
  check_pair(p, y);
  return (p - y).squaredNorm() / static_cast<double>(p.size());
}

double logloss(const Eigen::VectorXd& p, const Eigen::VectorXd& y,
               double clip) {
  check_pair(p, y);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p(i), clip, 1.0 - clip);
    sum += y(i) * std::log(q) + (1.0 - y(i)) * std::log1p(-q);
  }
  return -sum / static_cast<double>(p.size());
}

MetricsReport evaluate(const Eigen::VectorXd& p, const Eigen::VectorXd& y) {
  return {auc(p, y), brier(p, y), logloss(p, y),
          static_cast<std::size_t>(p.size())};
}

}  // namespace dpgp
