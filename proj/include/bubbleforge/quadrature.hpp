#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bubbleforge/field_core.hpp"

namespace bubbleforge {

struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;
  std::size_t n_evals = 0;
};

/// m-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes, weights;
};
GaussRule gauss_legendre(int m);

/// (n-1)-dimensional area of the unit sphere in R^n: 4 pi for n = 3, 2 pi^2 for n = 4.
double unit_sphere_area(int n);

/// Product rule on S^(n-1): m Gauss-Gegenbauer points in the cosine of each
/// polar angle (exact for the sin^k Jacobian) times 2m trapezoid points in azimuth.
/// Directions are generated on the fly; the weights sum to unit_sphere_area(n).
class SphereRule {
 public:
  SphereRule(int n, int m);

  int dim() const { return n_; }
  std::size_t size() const { return size_; }
  /// Direction and weight of the k-th node.
  double node(std::size_t k, Vec& dir) const;

 private:
  int n_, m_;
  std::size_t size_;
  std::vector<std::vector<double>> theta_, theta_w_;  // per polar angle; weights carry sin^k
};

int default_angular_points(int n);

/// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> xs);

struct QuadOptions {
  int angular_points = 0;       ///< 0 picks default_angular_points(n)
  double radial_tol = 1e-11;    ///< relative tolerance of the adaptive Gauss-Kronrod pass
  double radial_abs_tol = 1e-15;
  unsigned radial_depth = 8;    ///< at most 2^depth subintervals per ray piece
  bool parallel = true;
  bool angular_error = true;    ///< rerun with m/2 points and add the difference to err_est
  /// Distances from the polar origin where the integrand loses smoothness
  /// (transition radii of concentric constructions).
  std::vector<double> radial_breaks;
};

/// Integration region seen from a polar origin: the part of `outer` at
/// distance in [r_min, r_max] from the origin and outside `hole`.
struct PolarRegion {
  Ball outer;
  std::optional<Ball> hole;
  double r_min = 0.0;
  double r_max = -1.0;  ///< negative means unbounded
};

/// Integral of g over the region in polar coordinates about `origin`. The
/// radial factor r^(n-1) is applied here, so g may blow up like r^(1-n) at
/// the origin.
QuadResult integrate_polar(const ScalarFn& g, const Vec& origin, const PolarRegion& region,
                           const QuadOptions& opt = {});

/// Surface integral of g over the sphere bounding `sphere`; g also receives
/// the outward unit normal.
using SurfaceFn = std::function<double(const Vec& x, const Vec& normal)>;
QuadResult integrate_sphere(const SurfaceFn& g, const Ball& sphere, const QuadOptions& opt = {});

}  // namespace bubbleforge
