#pragma once

// Synthetic two-class datasets, seeded splits and the `x1,x2,y` CSV format.

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dpgp {

struct LabeledPoint {
  std::array<double, 2> x{};
  int y = 0;  // 0 or 1

  bool operator==(const LabeledPoint&) const = default;
};

struct Dataset {
  std::vector<LabeledPoint> points;
  std::string name;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
  bool has_both_classes() const;
  std::size_t count_class(int y) const;

  /// Inputs as an n x 2 matrix, row i = points[i].x.
  Eigen::MatrixXd inputs() const;
  /// Labels as an n-vector of 0.0 / 1.0.
  Eigen::VectorXd labels() const;
};

struct SplitDataset {
  Dataset train;
  Dataset test;
  double train_fraction = 0.0;
  // Positions of each split's points in the original dataset.
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

enum class DatasetKind { moons, circles };

DatasetKind parse_dataset_kind(std::string_view name);
std::string_view to_string(DatasetKind kind);

/// Two interleaving half circles. Class 0 lies on (cos t, sin t), class 1 on
/// (1 - cos t, 0.5 - sin t), with t on an even grid over [0, pi] (endpoints
/// included), n/2 points per class, followed by N(0, noise_sigma^2) noise per
/// coordinate. Throws ValidationError for odd n or n < 4.
Dataset make_moons(std::size_t n, double noise_sigma, std::uint64_t seed);

/// Two concentric circles: class 0 on the unit circle, class 1 on radius
/// `inner_radius_factor`. Angles on an even grid over [0, 2 pi).
Dataset make_circles(std::size_t n, double noise_sigma,
                     double inner_radius_factor, std::uint64_t seed);

/// Seeded uniform permutation followed by a prefix split. The training part
/// gets round(train_fraction * n) points and must contain both classes.
SplitDataset split(const Dataset& d, double train_fraction,
                   std::uint64_t seed);

/// Reads a `x1,x2,y` CSV. Parse errors name the offending line.
Dataset read_csv(const std::filesystem::path& path);
Dataset parse_csv(std::string_view text, std::string name = "");
void write_csv(const Dataset& d, const std::filesystem::path& path);
std::string to_csv(const Dataset& d);

}  // namespace dpgp
