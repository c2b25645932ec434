#include "dpgp/dataset.hpp"
#include "dpgp/error.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

using namespace dpgp;

TEST_CASE("make_moons zero-noise endpoints") {
  const Dataset d = make_moons(4, 0.0, 123);
  REQUIRE(d.size() == 4);
  CHECK(d.points[0] == LabeledPoint{{1.0, 0.0}, 0});
  CHECK(d.points[1].x[0] == -1.0);
  CHECK(d.points[1].x[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d.points[1].y == 0);
  CHECK(d.points[2] == LabeledPoint{{0.0, 0.5}, 1});
  CHECK(d.points[3].x[0] == 2.0);
  CHECK(d.points[3].x[1] == doctest::Approx(0.5));
  CHECK(d.points[3].y == 1);
}

TEST_CASE("make_moons 1000-point sample is balanced and finite") {
  const Dataset d = make_moons(1000, 0.3, 42);
  CHECK(d.size() == 1000);
  CHECK(d.count_class(0) == 500);
  CHECK(d.count_class(1) == 500);
  for (const auto& p : d.points) {
    CHECK(std::isfinite(p.x[0]));
    CHECK(std::isfinite(p.x[1]));
  }
}

TEST_CASE("noise-free generators ignore the seed") {
  const Dataset a = make_moons(100, 0.0, 1);
  const Dataset b = make_moons(100, 0.0, 2);
  CHECK(a.points == b.points);
  CHECK(make_circles(100, 0.0, 0.5, 1).points ==
        make_circles(100, 0.0, 0.5, 9).points);
}

TEST_CASE("generators are deterministic given the seed") {
  CHECK(make_moons(200, 0.3, 5).points == make_moons(200, 0.3, 5).points);
  CHECK(make_moons(200, 0.3, 5).points != make_moons(200, 0.3, 6).points);
  CHECK(make_circles(200, 0.1, 0.5, 5).points ==
        make_circles(200, 0.1, 0.5, 5).points);
}

TEST_CASE("zero-noise moons lie on their arcs") {
  const Dataset d = make_moons(60, 0.0, 0);
  for (const auto& p : d.points) {
    if (p.y == 0) {
      CHECK(std::hypot(p.x[0], p.x[1]) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(p.x[1] >= 0.0);
    } else {
      CHECK(std::hypot(1.0 - p.x[0], 0.5 - p.x[1]) ==
            doctest::Approx(1.0).epsilon(1e-15));
      CHECK(p.x[1] <= 0.5);
    }
  }
}

TEST_CASE("make_circles zero-noise grid") {
  const Dataset d = make_circles(4, 0.0, 0.5, 0);
  REQUIRE(d.size() == 4);
  CHECK(d.points[0] == LabeledPoint{{1.0, 0.0}, 0});
  CHECK(d.points[1].x[0] == -1.0);
  CHECK(d.points[1].x[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d.points[2] == LabeledPoint{{0.5, 0.0}, 1});
  CHECK(d.points[3].x[0] == -0.5);
  CHECK(d.points[3].y == 1);
}

TEST_CASE("zero-noise inner ring has radius exactly 0.5") {
  const Dataset d = make_circles(200, 0.0, 0.5, 0);
  std::size_t inner = 0;
  for (const auto& p : d.points) {
    if (p.y != 1) continue;
    ++inner;
    CHECK(std::abs(std::hypot(p.x[0], p.x[1]) - 0.5) == 0.0);
  }
  CHECK(inner == 100);
}

TEST_CASE("circles with noise: outer radii concentrate near 1") {
  const Dataset d = make_circles(1000, 0.1, 0.5, 7);
  CHECK(d.count_class(0) == 500);
  CHECK(d.count_class(1) == 500);
  double sum = 0.0;
  for (const auto& p : d.points)
    if (p.y == 0) sum += std::hypot(p.x[0], p.x[1]);
  CHECK(sum / 500.0 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("generator argument validation") {
  CHECK_THROWS_AS(make_moons(3, 0.1, 0), ValidationError);
  CHECK_THROWS_AS(make_moons(7, 0.1, 0), ValidationError);
  CHECK_THROWS_AS(make_moons(2, 0.1, 0), ValidationError);
  CHECK_THROWS_AS(make_moons(10, -1.0, 0), ValidationError);
  CHECK_THROWS_AS(make_circles(10, 0.1, 1.0, 0), ValidationError);
  CHECK_THROWS_AS(make_circles(10, 0.1, 0.0, 0), ValidationError);
  CHECK_THROWS_AS(make_circles(10, 0.1, 1.5, 0), ValidationError);
}

TEST_CASE("split sizes, partition and determinism") {
  const Dataset d = make_moons(1000, 0.3, 42);
  const SplitDataset s = split(d, 0.7, 3);
  CHECK(s.train.size() == 700);
  CHECK(s.test.size() == 300);

  std::set<std::size_t> all(s.train_indices.begin(), s.train_indices.end());
  for (auto i : s.test_indices) CHECK(all.insert(i).second);
  CHECK(all.size() == 1000);
  CHECK(*all.rbegin() == 999);
  for (std::size_t k = 0; k < s.train_indices.size(); ++k)
    CHECK(s.train.points[k] == d.points[s.train_indices[k]]);

  const Dataset small = make_moons(10, 0.2, 1);
  const SplitDataset a = split(small, 0.5, 9);
  const SplitDataset b = split(small, 0.5, 9);
  CHECK(a.train_indices == b.train_indices);
  CHECK(a.test.points == b.test.points);
}

TEST_CASE("split rejects a single-class training set") {
  Dataset d;
  for (int i = 0; i < 10; ++i) d.points.push_back({{double(i), 0.0}, 0});
  CHECK_THROWS_AS(split(d, 0.5, 1), ValidationError);
  CHECK_THROWS_AS(split(make_moons(10, 0.0, 0), 1.0, 1), ValidationError);
  CHECK_THROWS_AS(split(make_moons(10, 0.0, 0), 0.0, 1), ValidationError);
}

TEST_CASE("csv round trip is lossless") {
  const Dataset d = make_moons(200, 0.3, 17);
  const Dataset back = parse_csv(to_csv(d));
  CHECK(back.points == d.points);

  const auto path = std::filesystem::temp_directory_path() / "dpgp_dataset_rt.csv";
  write_csv(d, path);
  CHECK(read_csv(path).points == d.points);
  std::filesystem::remove(path);
}

TEST_CASE("csv validation errors name the problem") {
  auto message = [](std::string_view text) {
    try {
      parse_csv(text);
    } catch (const FormatError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("x1,x2,y\n0.1,0.2,2\n").find("label must be 0 or 1") !=
        std::string::npos);
  CHECK(message("x1,x2,y\n0.1,0.2,2\n").find("line 2") != std::string::npos);
  CHECK(message("").find("no data rows") != std::string::npos);
  CHECK(message("x1,x2,y\n").find("no data rows") != std::string::npos);
  CHECK(message("x1,x2,y\n0,0,1\n0.1,abc,0\n").find("line 3") != std::string::npos);
  CHECK(message("x1,x2,y\n0.1,0.2\n").find("expected 3 fields") != std::string::npos);
  CHECK(message("a,b,c\n0,0,1\n").find("header") != std::string::npos);
  CHECK_THROWS_AS(read_csv("/nonexistent/dir/file.csv"), IoError);
}
