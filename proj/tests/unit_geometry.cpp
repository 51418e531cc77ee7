#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "ridgechev/errors.hpp"
#include "ridgechev/geometry.hpp"

using namespace ridgechev;
using Catch::Matchers::ContainsSubstring;

namespace {

PointSet unit_square(std::vector<double> f = {0.0, 1.0, 1.0, 0.0}) {
  return PointSet::create({{{0, 0}}, {{0, 1}}, {{1, 0}}, {{1, 1}}}, std::move(f));
}

DirectionPair axes() { return DirectionPair::create({1, 0}, {0, 1}); }

} // namespace

TEST_CASE("point set validation") {
  REQUIRE_THROWS_AS(PointSet::create({}, {}), input_error);
  REQUIRE_THROWS_AS(PointSet::create({{{1.0}}}, {1.0, 2.0}), input_error);
  REQUIRE_THROWS_AS(PointSet::create({{{}}}, {1.0}), input_error);
  REQUIRE_THROWS_AS(PointSet::create({{{0.0}}, {{0.0, 1.0}}}, {1.0, 2.0}), input_error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(PointSet::create({{{nan}}}, {1.0}), input_error);
  REQUIRE_THROWS_AS(PointSet::create({{{0.0}}}, {inf}), input_error);
}

TEST_CASE("duplicate points are rejected with both indices") {
  REQUIRE_THROWS_WITH(
      PointSet::create({{{0, 0}}, {{0, 1}}, {{1, 0}}, {{0, 0}}}, {1, 2, 3, 4}),
      ContainsSubstring("indices 0 and 3"));
}

TEST_CASE("projection is a plain dot product") {
  Point p{{1.0, 2.0, 3.0}};
  std::vector<double> a{0.5, -1.0, 2.0};
  REQUIRE(project(p, a) == 0.5 * 1.0 + -1.0 * 2.0 + 2.0 * 3.0);
  std::vector<double> short_dir{1.0, 2.0};
  REQUIRE_THROWS_AS(project(p, short_dir), input_error);
}

TEST_CASE("levels of the unit square under axis directions") {
  auto ps = unit_square();
  auto L = build_levels(ps, axes());
  REQUIRE(L.levels1 == std::vector<double>{0.0, 1.0});
  REQUIRE(L.levels2 == std::vector<double>{0.0, 1.0});
  // Point order: (0,0), (0,1), (1,0), (1,1).
  REQUIRE(L.assignment == std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  REQUIRE(L.fibers1 == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
  REQUIRE(L.fibers2 == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
  REQUIRE_FALSE(L.width_warning1);
  REQUIRE(L.width1 == 0.0);
}

TEST_CASE("default tau merges sub-noise projections, tau 0 keeps them apart") {
  auto ps = PointSet::create({{{0.0, 0}}, {{1e-12, 0}}, {{1.0, 0}}}, {1, 2, 3});
  auto L = build_levels(ps, axes());  // default tau = 1e-9 * spread = 1e-9
  REQUIRE(L.levels1.size() == 2);
  REQUIRE(L.levels1[0] == 5e-13);  // cluster representative = midpoint
  REQUIRE(L.level1(0) == 0);
  REQUIRE(L.level1(1) == 0);
  REQUIRE(L.level1(2) == 1);

  auto exact = build_levels(ps, axes(), 0.0);
  REQUIRE(exact.levels1.size() == 3);

  auto coarse = build_levels(ps, axes(), 2.0);
  REQUIRE(coarse.levels1.size() == 1);
  REQUIRE(coarse.fibers1 == std::vector<std::vector<int>>{{0, 1, 2}});
}

TEST_CASE("single-linkage chaining triggers the width warning") {
  const double tau = std::ldexp(1.0, -20);  // power of two: i * tau is exact
  std::vector<Point> pts;
  std::vector<double> f;
  for (int i = 0; i <= 20; ++i) {
    pts.push_back({{i * tau, static_cast<double>(i)}});
    f.push_back(0.0);
  }
  auto ps = PointSet::create(std::move(pts), std::move(f));
  auto L = build_levels(ps, axes(), tau);
  REQUIRE(L.levels1.size() == 1);
  REQUIRE(L.width1 == 20 * tau);
  REQUIRE(L.width_warning1);
  REQUIRE_FALSE(L.width_warning2);  // direction 2 is well separated
}

TEST_CASE("per-direction default tau follows each direction's spread") {
  auto ps = PointSet::create({{{0, 0}}, {{1, 1000}}}, {0, 0});
  auto L = build_levels(ps, axes());
  REQUIRE(L.tau1 == 1e-9);
  REQUIRE(L.tau2 == 1e-9 * 1000.0);
}

TEST_CASE("build_levels rejects bad arguments") {
  auto ps = unit_square();
  REQUIRE_THROWS_AS(build_levels(ps, axes(), -1.0), input_error);
  auto dirs3 = DirectionPair::create({1, 0, 0}, {0, 1, 0});
  REQUIRE_THROWS_AS(build_levels(ps, dirs3), input_error);
}

TEST_CASE("direction pair validation") {
  REQUIRE_THROWS_AS(DirectionPair::create({}, {}), input_error);
  REQUIRE_THROWS_AS(DirectionPair::create({1, 0}, {1}), input_error);
  REQUIRE_THROWS_AS(DirectionPair::create({0, 0}, {0, 1}), input_error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(DirectionPair::create({1, 0}, {nan, 1}), input_error);
}

TEST_CASE("parallel detection") {
  REQUIRE_FALSE(detect_parallel(axes()));
  REQUIRE(detect_parallel(DirectionPair::create({1, 2}, {2, 4})));
  REQUIRE(detect_parallel(DirectionPair::create({1, 2}, {-1, -2})));
  REQUIRE(detect_parallel(DirectionPair::create({1, 0}, {1, 1e-9})));
  REQUIRE_FALSE(detect_parallel(DirectionPair::create({1, 0}, {1, 1e-3})));
}
