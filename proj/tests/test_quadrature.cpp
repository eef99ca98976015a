#include <doctest.h>

#include <cmath>
#include <numeric>

#include "bubbleforge/quadrature.hpp"
#include "support.hpp"

using namespace bubbleforge;
using doctest::Approx;

TEST_CASE("Gauss-Legendre is exact to degree 2m-1") {
  for (int m = 1; m <= 12; ++m) {
    const GaussRule r = gauss_legendre(m);
    for (int d = 0; d <= 2 * m - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(s == Approx(exact).scale(1.0).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), InvalidInput);
}

TEST_CASE("sphere areas and rule weights") {
  CHECK(unit_sphere_area(3) == Approx(4 * M_PI).epsilon(1e-15));
  CHECK(unit_sphere_area(4) == Approx(2 * M_PI * M_PI).epsilon(1e-15));
  for (int n = 3; n <= 6; ++n) {
    const SphereRule rule(n, 8);
    double w = 0.0, first = 0.0;
    Vec dir;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double wk = rule.node(k, dir);
      CHECK(dir.norm() == Approx(1.0).epsilon(1e-14));
      w += wk;
      first += wk * dir[0] * dir[0];
    }
    CHECK(w == Approx(unit_sphere_area(n)).epsilon(1e-13));
    // the mean of x_1^2 over the sphere is 1/n
    CHECK(first == Approx(unit_sphere_area(n) / n).epsilon(1e-12));
  }
}

TEST_CASE("pairwise summation") {
  std::vector<double> xs(1000);
  std::iota(xs.begin(), xs.end(), 1.0);
  CHECK(pairwise_sum(xs) == 500500.0);
  CHECK(pairwise_sum({}) == 0.0);
}

TEST_CASE("ball volume and moments") {
  for (int n = 3; n <= 6; ++n) {
    const Vec o = Vec::zeros(n);
    const QuadResult v = integrate_polar([](const Vec&) { return 1.0; }, o, {{o, 2.0}, {}, 0.0, -1.0});
    CHECK(v.value == Approx(unit_sphere_area(n) * std::pow(2.0, n) / n).epsilon(1e-12));
    // off-center polar origin, shell hole
    const Vec c = Vec::unit(n, 0, 0.3);
    const QuadResult s = integrate_polar([](const Vec& x) { return x.norm2(); }, c, {{o, 1.0}, Ball{o, 0.5}, 0.0, -1.0});
    const double exact = unit_sphere_area(n) * (1.0 - std::pow(0.5, n + 2)) / (n + 2);
    CHECK(s.value == Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("serial and parallel quadrature agree bit for bit") {
  const int n = 4;
  const Vec o = Vec::zeros(n);
  const ScalarFn g = [](const Vec& x) { return std::exp(-x.norm2()) * (1.0 + x[1]); };
  QuadOptions par, ser;
  ser.parallel = false;
  const PolarRegion reg{{o, 1.5}, {}, 0.0, -1.0};
  const QuadResult a = integrate_polar(g, Vec::unit(n, 1, 0.2), reg, par);
  const QuadResult b = integrate_polar(g, Vec::unit(n, 1, 0.2), reg, ser);
  CHECK(a.value == b.value);
  CHECK(a.err_est == b.err_est);
  CHECK(a.n_evals == b.n_evals);
}

TEST_CASE("integrable singularity at the polar origin") {
  const Vec o = Vec::zeros(3);
  const QuadResult r = integrate_polar([](const Vec& x) { return 1.0 / x.norm2(); }, o, {{o, 1.0}, {}, 0.0, -1.0});
  CHECK(r.value == Approx(4 * M_PI).epsilon(1e-12));
}

TEST_CASE("surface integrals") {
  const Ball s{Vec{0.1, 0.2, 0.3}, 2.0};
  const QuadResult area = integrate_sphere([](const Vec&, const Vec&) { return 1.0; }, s);
  CHECK(area.value == Approx(4 * M_PI * 4).epsilon(1e-13));
  // flux of x through the sphere is n |B|
  const QuadResult flux = integrate_sphere([](const Vec& x, const Vec& nu) { return x.dot(nu); }, s);
  CHECK(flux.value == Approx(3 * 4 * M_PI * 8 / 3).epsilon(1e-12));
}
