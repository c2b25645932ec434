#include "dpgp/dataset.hpp"

#include "dpgp/error.hpp"
#include "dpgp/io.hpp"
#include "dpgp/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace dpgp {

namespace {

// Stream keys keep the noise of the two generators independent even when
// they share a seed.
constexpr std::uint64_t kMoonsStream = 0x6d6f6f6e73ULL;
constexpr std::uint64_t kCirclesStream = 0x636972636cULL;
constexpr std::uint64_t kSplitStream = 0x73706c6974ULL;

void check_size(std::size_t n) {
  if (n < 4 || n % 2 != 0)
    throw ValidationError("n must be an even number >= 4, got " +
                          std::to_string(n));
}

void check_noise(double noise_sigma) {
  if (!std::isfinite(noise_sigma) || noise_sigma < 0.0)
    throw ValidationError("noise must be finite and >= 0");
}

void add_noise(Dataset& d, double noise_sigma, std::uint64_t stream) {
  if (noise_sigma == 0.0) return;
  Rng rng(d.seed, {stream});
  for (auto& p : d.points) {
    p.x[0] += noise_sigma * rng.normal();
    p.x[1] += noise_sigma * rng.normal();
  }
}

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

bool Dataset::has_both_classes() const {
  return count_class(0) > 0 && count_class(1) > 0;
}

std::size_t Dataset::count_class(int y) const {
  std::size_t c = 0;
  for (const auto& p : points) c += (p.y == y);
  return c;
}

Eigen::MatrixXd Dataset::inputs() const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    x(static_cast<Eigen::Index>(i), 0) = points[i].x[0];
    x(static_cast<Eigen::Index>(i), 1) = points[i].x[1];
  }
  return x;
}

Eigen::VectorXd Dataset::labels() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    y(static_cast<Eigen::Index>(i)) = points[i].y;
  return y;
}

DatasetKind parse_dataset_kind(std::string_view name) {
  if (name == "moons") return DatasetKind::moons;
  if (name == "circles") return DatasetKind::circles;
  throw ValidationError("unknown dataset kind '" + std::string(name) +
                        "' (expected moons or circles)");
}

std::string_view to_string(DatasetKind kind) {
  return kind == DatasetKind::moons ? "moons" : "circles";
}

Dataset make_moons(std::size_t n, double noise_sigma, std::uint64_t seed) {
  check_size(n);
  check_noise(noise_sigma);
  const std::size_t half = n / 2;
  Dataset d;
  d.name = "moons";
  d.seed = seed;
  d.points.reserve(n);
  const double step = std::numbers::pi / static_cast<double>(half - 1);
  for (std::size_t i = 0; i < half; ++i) {
    const double t = i + 1 == half ? std::numbers::pi : step * i;
    d.points.push_back({{std::cos(t), std::sin(t)}, 0});
  }
  for (std::size_t i = 0; i < half; ++i) {
    const double t = i + 1 == half ? std::numbers::pi : step * i;
    d.points.push_back({{1.0 - std::cos(t), 0.5 - std::sin(t)}, 1});
  }
  add_noise(d, noise_sigma, kMoonsStream);
  return d;
}

Dataset make_circles(std::size_t n, double noise_sigma,
                     double inner_radius_factor, std::uint64_t seed) {
  check_size(n);
  check_noise(noise_sigma);
  if (!(inner_radius_factor > 0.0 && inner_radius_factor < 1.0))
    throw ValidationError("inner_radius_factor must lie in (0, 1)");
  const std::size_t half = n / 2;
  Dataset d;
  d.name = "circles";
  d.seed = seed;
  d.points.reserve(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(half);
  for (std::size_t i = 0; i < half; ++i) {
    const double t = step * i;
    d.points.push_back({{std::cos(t), std::sin(t)}, 0});
  }
  for (std::size_t i = 0; i < half; ++i) {
    const double t = step * i;
    d.points.push_back({{inner_radius_factor * std::cos(t),
                         inner_radius_factor * std::sin(t)},
                        1});
  }
  add_noise(d, noise_sigma, kCirclesStream);
  return d;
}

SplitDataset split(const Dataset& d, double train_fraction,
                   std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ValidationError("train_fraction must lie in (0, 1)");
  const std::size_t n = d.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed, {kSplitStream});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));

  SplitDataset s;
  s.train_fraction = train_fraction;
  s.train.name = d.name + "-train";
  s.test.name = d.name + "-test";
  s.train.seed = s.test.seed = d.seed;
  s.train_indices.assign(perm.begin(), perm.begin() + n_train);
  s.test_indices.assign(perm.begin() + n_train, perm.end());
  for (auto i : s.train_indices) s.train.points.push_back(d.points[i]);
  for (auto i : s.test_indices) s.test.points.push_back(d.points[i]);
  if (!s.train.has_both_classes())
    throw ValidationError(
        "training split contains a single class; the model cannot be fitted");
  return s;
}

Dataset parse_csv(std::string_view text, std::string name) {
  auto lines = io::split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw FormatError("no data rows");
  if (lines.front() != "x1,x2,y")
    throw FormatError(line_error(1, "expected header 'x1,x2,y'"));
  if (lines.size() == 1) throw FormatError("no data rows");

  Dataset d;
  d.name = std::move(name);
  d.points.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    auto fields = io::split_fields(lines[i]);
    if (fields.size() != 3)
      throw FormatError(line_error(lineno, "expected 3 fields, got " +
                                               std::to_string(fields.size())));
    LabeledPoint p;
    for (int k = 0; k < 2; ++k) {
      auto v = io::parse_double(fields[k]);
      if (!v || !std::isfinite(*v))
        throw FormatError(line_error(
            lineno, "non-numeric coordinate '" + std::string(fields[k]) + "'"));
      p.x[k] = *v;
    }
    if (fields[2] == "0")
      p.y = 0;
    else if (fields[2] == "1")
      p.y = 1;
    else
      throw FormatError(line_error(lineno, "label must be 0 or 1"));
    d.points.push_back(p);
  }
  return d;
}

Dataset read_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(io::read_file(path), path.stem().string());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string to_csv(const Dataset& d) {
  std::string out = "x1,x2,y\n";
  out.reserve(d.size() * 44 + 8);
  for (const auto& p : d.points) {
    io::append_double(out, p.x[0]);
    out += ',';
    io::append_double(out, p.x[1]);
    out += p.y ? ",1\n" : ",0\n";
  }
  return out;
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
  io::write_file(path, to_csv(d));
}

}  // namespace dpgp
