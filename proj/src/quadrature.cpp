#include "bubbleforge/quadrature.hpp"

#include <algorithm>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "bubbleforge/scan.hpp"

namespace bubbleforge {

GaussRule gauss_legendre(int m) {
  if (m < 1) throw InvalidInput("gauss_legendre needs at least one point");
  GaussRule r;
  r.nodes.resize(m);
  r.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[m - 1 - i] = x;
    r.weights[i] = r.weights[m - 1 - i] = w;
  }
  return r;
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

int default_angular_points(int n) {
  switch (n) {
    case 3: return 32;
    case 4: return 24;
    case 5: return 16;
    default: return 12;
  }
}

namespace {

// Golub-Welsch for the weight (1 - t^2)^(l - 1/2) on [-1, 1]; l = 1/2 is Legendre.
GaussRule gauss_gegenbauer(int m, double l) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int j = 1; j < m; ++j) {
    const double b = std::sqrt(j * (j + 2.0 * l - 1.0) / (4.0 * (j + l) * (j + l - 1.0)));
    J(j, j - 1) = J(j - 1, j) = b;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mass = std::sqrt(std::numbers::pi) * std::tgamma(l + 0.5) / std::tgamma(l + 1.0);
  GaussRule r;
  for (int i = 0; i < m; ++i) {
    r.nodes.push_back(es.eigenvalues()(i));
    r.weights.push_back(mass * es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
  }
  return r;
}

}  // namespace

SphereRule::SphereRule(int n, int m) : n_(n), m_(m) {
  if (n < 2 || m < 1) throw InvalidInput("sphere rule needs n >= 2 and m >= 1");
  size_ = 2 * static_cast<std::size_t>(m);
  for (int k = 0; k < n - 2; ++k) {
    // sin^p(theta) d theta = (1 - t^2)^((p-1)/2) dt with t = cos(theta)
    const int power = n - 2 - k;
    const GaussRule g = gauss_gegenbauer(m, 0.5 * power);
    std::vector<double> th(m);
    for (int i = 0; i < m; ++i) th[i] = std::acos(std::clamp(g.nodes[i], -1.0, 1.0));
    theta_.push_back(std::move(th));
    theta_w_.push_back(g.weights);
    size_ *= static_cast<std::size_t>(m);
  }
}

double SphereRule::node(std::size_t k, Vec& dir) const {
  double angles[kMaxDim];
  const auto az = static_cast<std::size_t>(2 * m_);
  const std::size_t j = k % az;
  k /= az;
  angles[n_ - 2] = std::numbers::pi * static_cast<double>(j) / m_;
  double w = std::numbers::pi / m_;
  for (int a = n_ - 3; a >= 0; --a) {
    const std::size_t i = k % static_cast<std::size_t>(m_);
    k /= static_cast<std::size_t>(m_);
    angles[a] = theta_[a][i];
    w *= theta_w_[a][i];
  }
  dir = sphere_point({angles, static_cast<std::size_t>(n_ - 1)}, n_);
  return w;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t h = xs.size() / 2;
  return pairwise_sum(xs.first(h)) + pairwise_sum(xs.subspan(h));
}

namespace {

struct Interval {
  double a, b;
};

// [t_lo, t_hi] with |o + t dir - c| < R, t >= 0, or nothing
std::optional<Interval> ray_ball(const Vec& o, const Vec& dir, const Ball& ball) {
  const Vec d = o - ball.center;
  const double b = dir.dot(d);
  const double disc = b * b - (d.norm2() - ball.radius * ball.radius);
  if (disc <= 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  const double hi = -b + s;
  if (hi <= 0.0) return std::nullopt;
  return Interval{std::max(0.0, -b - s), hi};
}

std::vector<Interval> ray_pieces(const Vec& o, const Vec& dir, const PolarRegion& reg,
                                 const std::vector<double>& breaks) {
  std::vector<Interval> out;
  const auto main = ray_ball(o, dir, reg.outer);
  if (!main) return out;
  std::vector<Interval> parts{*main};
  if (reg.hole) {
    if (const auto h = ray_ball(o, dir, *reg.hole)) {
      parts.clear();
      if (h->a > main->a) parts.push_back({main->a, std::min(main->b, h->a)});
      if (h->b < main->b) parts.push_back({std::max(main->a, h->b), main->b});
    }
  }
  for (Interval p : parts) {
    p.a = std::max(p.a, reg.r_min);
    if (reg.r_max >= 0.0) p.b = std::min(p.b, reg.r_max);
    if (!(p.b > p.a)) continue;
    double lo = p.a;
    for (double br : breaks) {
      if (br > lo && br < p.b) {
        out.push_back({lo, br});
        lo = br;
      }
    }
    out.push_back({lo, p.b});
  }
  return out;
}

struct RayResult {
  double value = 0.0, err = 0.0;
  std::size_t evals = 0;
};

// Globally adaptive Gauss-Kronrod: bisect the interval with the largest error
// estimate until the total meets the tolerance or the interval budget runs out.
template <class F>
RayResult adaptive_gk(const F& f, double a, double b, const QuadOptions& opt) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Piece {
    double a, b, value, err;
  };
  const auto eval = [&](double lo, double hi) {
    double err = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
    return Piece{lo, hi, v, err};
  };
  const auto worse = [](const Piece& x, const Piece& y) { return x.err < y.err; };
  std::vector<Piece> heap{eval(a, b)};
  double total = heap.front().value, err = heap.front().err;
  const std::size_t budget = std::size_t{1} << opt.radial_depth;
  while (err > opt.radial_tol * std::abs(total) && err > opt.radial_abs_tol && heap.size() < budget) {
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Piece w = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (w.a + w.b);
    if (!(mid > w.a && mid < w.b)) {
      heap.push_back(w);
      std::push_heap(heap.begin(), heap.end(), worse);
      break;
    }
    const Piece l = eval(w.a, mid), r = eval(mid, w.b);
    total += l.value + r.value - w.value;
    err += l.err + r.err - w.err;
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end(), worse);
  }
  // re-sum in interval order so the result does not depend on the heap history
  std::sort(heap.begin(), heap.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  RayResult out;
  for (const Piece& p : heap) {
    out.value += p.value;
    out.err += p.err;
  }
  out.evals = 15 * (2 * heap.size() - 1);
  return out;
}

RayResult integrate_ray(const ScalarFn& g, const Vec& o, const Vec& dir, const PolarRegion& reg,
                        const QuadOptions& opt, const std::vector<double>& breaks) {
  RayResult r;
  const int n = o.dim();
  const auto f = [&](double t) { return g(o + dir * t) * std::pow(t, n - 1); };
  for (const Interval& iv : ray_pieces(o, dir, reg, breaks)) {
    const RayResult piece = adaptive_gk(f, iv.a, iv.b, opt);
    r.value += piece.value;
    r.err += piece.err;
    r.evals += piece.evals;
  }
  return r;
}

QuadResult polar_pass(const ScalarFn& g, const Vec& origin, const PolarRegion& reg, const QuadOptions& opt,
                      int m, const std::vector<double>& breaks) {
  const SphereRule rule(origin.dim(), m);
  const auto total = static_cast<std::ptrdiff_t>(rule.size());
  std::vector<double> vals(total), errs(total);
  std::vector<std::size_t> evals(total);
  const auto body = [&](std::ptrdiff_t k) {
    Vec dir;
    const double w = rule.node(static_cast<std::size_t>(k), dir);
    const RayResult rr = integrate_ray(g, origin, dir, reg, opt, breaks);
    vals[k] = w * rr.value;
    errs[k] = w * rr.err;
    evals[k] = rr.evals;
  };
  if (opt.parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
      try {
        body(k);
      } catch (...) {
#pragma omp critical(bubbleforge_quad_error)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::ptrdiff_t k = 0; k < total; ++k) body(k);
  }
  QuadResult q;
  q.value = pairwise_sum(vals);
  q.err_est = pairwise_sum(errs);
  for (std::size_t e : evals) q.n_evals += e;
  return q;
}

}  // namespace

QuadResult integrate_polar(const ScalarFn& g, const Vec& origin, const PolarRegion& region, const QuadOptions& opt) {
  const int n = origin.dim();
  if (region.outer.center.dim() != n) throw InvalidInput("integrate_polar: dimension mismatch");
  if (!(region.outer.radius > 0.0)) throw BadRadii("integrate_polar: outer radius must be positive");
  const int m = opt.angular_points > 0 ? opt.angular_points : default_angular_points(n);
  std::vector<double> breaks = opt.radial_breaks;
  std::sort(breaks.begin(), breaks.end());
  QuadResult q = polar_pass(g, origin, region, opt, m, breaks);
  if (opt.angular_error && m >= 4) {
    const QuadResult half = polar_pass(g, origin, region, opt, m / 2, breaks);
    q.err_est += std::abs(q.value - half.value);
    q.n_evals += half.n_evals;
  }
  return q;
}

QuadResult integrate_sphere(const SurfaceFn& g, const Ball& sphere, const QuadOptions& opt) {
  const int n = sphere.center.dim();
  const int m = opt.angular_points > 0 ? opt.angular_points : default_angular_points(n);
  const double jac = std::pow(sphere.radius, n - 1);
  const auto pass = [&](int mm) {
    const SphereRule rule(n, mm);
    std::vector<double> vals(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
      Vec dir;
      const double w = rule.node(k, dir);
      vals[k] = w * g(sphere.center + dir * sphere.radius, dir);
    }
    return std::pair{jac * pairwise_sum(vals), rule.size()};
  };
  const auto [v, cnt] = pass(m);
  QuadResult q{v, 0.0, cnt};
  if (opt.angular_error && m >= 4) {
    const auto [vh, ch] = pass(m / 2);
    q.err_est = std::abs(v - vh);
    q.n_evals += ch;
  }
  return q;
}

}  // namespace bubbleforge
