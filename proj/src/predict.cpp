#include "dpgp/predict.hpp"

#include "dpgp/error.hpp"
#include "dpgp/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dpgp {

namespace {

constexpr std::uint64_t kLinkStream = 0x6c696e6bULL;

std::vector<LinkPosterior> link_posteriors(const LatentPosterior& posterior,
                                           const DpLinkConfig& dp_cfg) {
  std::vector<LinkPosterior> links;
  links.reserve(static_cast<std::size_t>(posterior.num_draws()));
  for (Eigen::Index s = 0; s < posterior.num_draws(); ++s)
    links.emplace_back(dp_cfg, posterior.draws.row(s));
  return links;
}

Eigen::VectorXd linspace(double lo, double hi, std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    v(static_cast<Eigen::Index>(i)) = i + 1 == n ? hi : lo + step * i;
  return v;
}

}  // namespace

LinkMode parse_link_mode(std::string_view name) {
  if (name == "sample") return LinkMode::sample;
  if (name == "mean") return LinkMode::mean;
  throw ValidationError("unknown link mode '" + std::string(name) +
                        "' (expected sample or mean)");
}

std::string_view to_string(LinkMode mode) {
  return mode == LinkMode::sample ? "sample" : "mean";
}

void PredictOptions::validate() const {
  if (!(level > 0.0 && level < 1.0))
    throw ValidationError("credible level must lie in (0, 1)");
  if (block_size < 1) throw ValidationError("block_size must be >= 1");
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

PredictiveSummary predict(const Eigen::MatrixXd& test_inputs,
                          const LatentPosterior& posterior,
                          const DpLinkConfig& dp_cfg,
                          const PredictOptions& options) {
  options.validate();
  dp_cfg.validate();
  const Eigen::Index m = test_inputs.rows();
  const Eigen::Index draws = posterior.num_draws();
  if (draws < 1) throw ValidationError("posterior has no draws");

  const auto links = link_posteriors(posterior, dp_cfg);
  const LatentPredictor predictor(posterior, options.seed);
  const double q_lo = 0.5 * (1.0 - options.level);
  const double q_hi = 1.0 - q_lo;

  PredictiveSummary out;
  out.level = options.level;
  out.p_mean.resize(m);
  out.p_lo.resize(m);
  out.p_hi.resize(m);
  if (options.keep_per_draw) out.per_draw = Eigen::MatrixXd(draws, m);

  std::vector<double> column(static_cast<std::size_t>(draws));
  std::uint64_t block_index = 0;
  for (Eigen::Index start = 0; start < m;
       start += options.block_size, ++block_index) {
    const Eigen::Index len = std::min(options.block_size, m - start);
    const Eigen::MatrixXd latent =
        predictor.block(test_inputs.middleRows(start, len), block_index);

    for (Eigen::Index jj = 0; jj < len; ++jj) {
      const Eigen::Index j = start + jj;
      if (draws == 1) {
        // Single latent vector: summarize the Beta marginal exactly.
        const BetaParams bp = links[0].beta_params(latent(0, jj));
        out.p_mean(j) = bp.mean();
        out.p_lo(j) = beta_quantile(bp, q_lo);
        out.p_hi(j) = beta_quantile(bp, q_hi);
        if (out.per_draw) (*out.per_draw)(0, j) = out.p_mean(j);
      } else {
        double sum = 0.0;
        for (Eigen::Index s = 0; s < draws; ++s) {
          const double t = latent(s, jj);
          const auto& link = links[static_cast<std::size_t>(s)];
          double p;
          if (options.link_mode == LinkMode::sample) {
            Rng rng(options.seed, {kLinkStream, static_cast<std::uint64_t>(s),
                                   static_cast<std::uint64_t>(j)});
            p = link.sample_g(t, rng);
          } else {
            p = link.ferguson_mean(t);
          }
          column[static_cast<std::size_t>(s)] = p;
          sum += p;
        }
        out.p_mean(j) = sum / static_cast<double>(draws);
        if (out.per_draw) {
          for (Eigen::Index s = 0; s < draws; ++s)
            (*out.per_draw)(s, j) = column[static_cast<std::size_t>(s)];
        }
        std::sort(column.begin(), column.end());
        out.p_lo(j) = sorted_quantile(column, q_lo);
        out.p_hi(j) = sorted_quantile(column, q_hi);
      }
      // The band always contains the predictive mean, even for strongly
      // skewed per-draw distributions.
      out.p_lo(j) = std::min(out.p_lo(j), out.p_mean(j));
      out.p_hi(j) = std::max(out.p_hi(j), out.p_mean(j));
    }
  }
  return out;
}

void GridSpec::validate() const {
  if (resolution < 2) throw ValidationError("grid resolution must be >= 2");
  for (double b : bounds)
    if (!std::isfinite(b)) throw ValidationError("grid bounds must be finite");
  if (!(bounds[0] < bounds[1]) || !(bounds[2] < bounds[3]))
    throw ValidationError("grid bounds must satisfy min < max on both axes");
}

std::array<double, 4> padded_bounds(const Eigen::MatrixXd& inputs, double pad) {
  if (inputs.rows() == 0 || inputs.cols() != 2)
    throw ValidationError("padded_bounds needs a non-empty n x 2 input matrix");
  return {inputs.col(0).minCoeff() - pad, inputs.col(0).maxCoeff() + pad,
          inputs.col(1).minCoeff() - pad, inputs.col(1).maxCoeff() + pad};
}

Eigen::MatrixXd grid_points(const GridSpec& spec) {
  spec.validate();
  const Eigen::VectorXd x1 = linspace(spec.bounds[0], spec.bounds[1], spec.resolution);
  const Eigen::VectorXd x2 = linspace(spec.bounds[2], spec.bounds[3], spec.resolution);
  const auto r = static_cast<Eigen::Index>(spec.resolution);
  Eigen::MatrixXd pts(r * r, 2);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) {
      pts(i * r + j, 0) = x1(j);
      pts(i * r + j, 1) = x2(i);
    }
  return pts;
}

GridResult grid(const GridSpec& spec, const LatentPosterior& posterior,
                const DpLinkConfig& dp_cfg, const PredictOptions& options) {
  const Eigen::MatrixXd pts = grid_points(spec);
  PredictOptions opts = options;
  opts.keep_per_draw = false;
  const PredictiveSummary summary = predict(pts, posterior, dp_cfg, opts);

  const auto r = static_cast<Eigen::Index>(spec.resolution);
  GridResult g;
  g.grid_x1 = linspace(spec.bounds[0], spec.bounds[1], spec.resolution);
  g.grid_x2 = linspace(spec.bounds[2], spec.bounds[3], spec.resolution);
  g.level = summary.level;
  // Row-major reshape: entry (i, j) <- point i * r + j.
  g.p_mean = summary.p_mean.reshaped<Eigen::RowMajor>(r, r);
  g.p_lo = summary.p_lo.reshaped<Eigen::RowMajor>(r, r);
  g.p_hi = summary.p_hi.reshaped<Eigen::RowMajor>(r, r);
  return g;
}

}  // namespace dpgp
