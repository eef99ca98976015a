#include <doctest.h>

#include <cmath>
#include <limits>

#include "bubbleforge/field_core.hpp"
#include "bubbleforge/scan.hpp"
#include "support.hpp"

using namespace bubbleforge;

namespace {

GridDescriptor cube(int n, int m) {
  GridDescriptor g;
  for (int i = 0; i < n; ++i) g.axes.push_back({-1.0, 1.0, m});
  return g;
}

std::optional<Vec> identity_map(std::span<const double> p) { return Vec::from_span(p); }

}  // namespace

TEST_CASE("grid flattening is lexicographic") {
  GridDescriptor g;
  g.axes = {{0, 1, 2}, {0, 2, 3}};
  CHECK(g.size() == 6);
  double p[2];
  g.params(4, p);  // (1, 1)
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 1.0);
  CHECK(GridAxis{0.5, 2.0, 1}.node(0) == 0.5);
}

TEST_CASE("serial and parallel scans agree exactly") {
  auto g = bftest::rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = bftest::uniform(g, 1, 5), b = bftest::uniform(g, 1, 5);
    const Objective obj = [&](const Vec& x) { return std::sin(a * x[0]) * std::cos(b * x[1]) + x[2] * x[2]; };
    const ScanHit s = scan_max_serial(cube(3, 21), identity_map, obj);
    const ScanHit p = scan_max_parallel(cube(3, 21), identity_map, obj);
    CHECK(s.value == p.value);
    CHECK(s.index == p.index);
    CHECK(s.point == p.point);
    CHECK(s.n_samples == p.n_samples);
  }
}

TEST_CASE("ties go to the first index") {
  const Objective flat = [](const Vec&) { return 1.0; };
  CHECK(scan_max_serial(cube(2, 9), identity_map, flat).index == 0);
  CHECK(scan_max_parallel(cube(2, 9), identity_map, flat).index == 0);
}

TEST_CASE("failures surface") {
  const Objective nan = [](const Vec& x) { return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0; };
  CHECK_THROWS_AS(scan_max_serial(cube(2, 9), identity_map, nan), NumericalFailure);
  CHECK_THROWS_AS(scan_max_parallel(cube(2, 9), identity_map, nan), NumericalFailure);
  const Objective bad = [](const Vec& x) -> double {
    if (x[1] > 0.9) throw NonpositiveValue("negative");
    return 0.0;
  };
  CHECK_THROWS_AS(scan_max_parallel(cube(2, 9), identity_map, bad), NonpositiveValue);
}

TEST_CASE("masked nodes are skipped") {
  const ParamMap disc = [](std::span<const double> p) -> std::optional<Vec> {
    const Vec x = Vec::from_span(p);
    if (x.norm() > 1.0) return std::nullopt;
    return x;
  };
  const ScanHit h = scan_max_parallel(cube(2, 11), disc, [](const Vec& x) { return x.norm2(); });
  CHECK(h.value <= 1.0 + 1e-12);
  CHECK(h.n_samples < 121);
}

TEST_CASE("refinement localizes a smooth peak") {
  const Vec peak{0.123, -0.456};
  const Objective obj = [&](const Vec& x) { return -(x - peak).norm2(); };
  const RefinedScan r = scan_max_refined(cube(2, 11), identity_map, obj, {10, 1, 3, true});
  CHECK((r.hit.point - peak).norm() < 2e-3 * 0.2);
  const RefinedScan s = scan_max_refined(cube(2, 11), identity_map, obj, {10, 1, 3, false});
  CHECK(r.hit.point == s.hit.point);
}

TEST_CASE("sphere points lie on the unit sphere") {
  auto g = bftest::rng(32);
  for (int n = 3; n <= 6; ++n) {
    std::vector<double> ang(n - 1);
    for (int k = 0; k < 20; ++k) {
      for (int i = 0; i < n - 2; ++i) ang[i] = bftest::uniform(g, 0, M_PI);
      ang[n - 2] = bftest::uniform(g, 0, 2 * M_PI);
      CHECK(sphere_point(ang, n).norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("region grids stay inside their region") {
  const int n = 3;
  const RegionGrid rg = region_grid(AnnulusRegion{Vec{0.1, 0, 0}, 0.5, 1.0}, n, GridSpec{11, 101, {}, false});
  std::vector<double> p(rg.grid.axes.size());
  for (std::size_t i = 0; i < rg.grid.size(); ++i) {
    rg.grid.params(i, p);
    if (const auto x = rg.map(p)) {
      const double r = (*x - Vec{0.1, 0, 0}).norm();
      CHECK(r >= 0.5 - 1e-12);
      CHECK(r <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("a single bubble has sup |K - 1| at roundoff level") {
  for (int n = 3; n <= 6; ++n) {
    const Field b = bubble_field(Bubble(0.5, Vec::zeros(n)));
    CHECK(sup_scan(b, BallRegion{Vec::zeros(n), 3.0}).sup_abs_dev <= 1e-8);
  }
  const Field off = bubble_field(Bubble(0.5, Vec{0.3, 0.1, 0}));
  GridSpec spec;
  spec.points_per_axis = 9;
  CHECK(sup_scan(off, BoxRegion{Vec{-1, -1, -1}, Vec{1, 1, 1}}, spec).sup_abs_dev <= 1e-8);
}
