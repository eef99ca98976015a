#include "bubbleforge/bounds.hpp"

#include <cmath>

namespace bubbleforge {

namespace {

void check_radii(double l1, double l2, double rho, double R) {
  if (!(l1 > 0.0 && l2 > 0.0)) throw InvalidInput("bubble scales must be positive");
  if (!(rho > 0.0 && rho < R)) throw BadRadii("need 0 < rho < R");
}

double ratio_constant(Dim n) { return 3.0 * (n.n() + 2) / (2.0 * (n.n() - 2)); }

}  // namespace

ThmAConditions thmA_conditions(double l1, double l2, double rho, double R, Dim n) {
  check_radii(l1, l2, rho, R);
  const double t = l1 / l2;
  return {t <= (rho * rho / (R * R)) / (1.0 + l2 * l2 / (R * R)),
          t * t >= ratio_constant(n) * (1.0 + std::pow(R / l2, 4))};
}

ThmAConditions thmA_dual_conditions(double l1, double l2, double rho, double R, Dim n) {
  check_radii(l1, l2, rho, R);
  const double t = l1 / l2;
  return {t <= (rho * rho / (R * R)) / (1.0 + rho * rho / (l1 * l1)),
          t * t >= ratio_constant(n) * (1.0 + std::pow(l1 / rho, 4))};
}

double lower_bound_4_4(double l1, double l2, double rho, double R, Dim n) {
  check_radii(l1, l2, rho, R);
  const int d = n.n();
  const double brace = l1 * l1 - l2 * l2 + n.critical_exponent() * (std::pow(rho, 4) / (l1 * l1) - std::pow(R, 4) / (l2 * l2));
  return (d - 2.0) / (2.0 * d) * brace / (R * R - rho * rho);
}

DepthFactors depth_factors(double l1, double l2, double rho, double R, Dim n) {
  check_radii(l1, l2, rho, R);
  DepthFactors f;
  f.k1 = rho / l1;
  f.k2 = R / l2;
  f.nu = std::pow((f.k1 * f.k1 + 1.0) / (f.k1 * f.k1), n.half());
  return f;
}

double depth_ratio(double l1, double rho, Dim n) {
  const Vec o = Vec::zeros(n.n());
  const Bubble b(l1, o);
  return std::pow(bubble_value(b, o) / bubble_value(b, Vec::unit(n.n(), 0, rho)), 1.0 / n.half());
}

bool depth_condition(const DepthFactors& d, double l1, double l2) {
  return l2 / l1 <= d.k1 * d.k1 / (d.k2 * d.k2 + 1.0);
}

bool value_condition(double l1, double l2, double rho, double R, Dim n) {
  const DepthFactors d = depth_factors(l1, l2, rho, R, n);
  const Vec o = Vec::zeros(n.n());
  return bubble_value(Bubble(l2, o), Vec::unit(n.n(), 0, R)) >= d.nu * bubble_value(Bubble(l1, o), Vec::unit(n.n(), 0, rho));
}

void validate(const ThmBParams& p, Dim n) {
  if (p.xi1.dim() != n.n() || p.xi2.dim() != n.n()) throw InvalidGeometry("centers must lie in R^n");
  if (!(p.lambda1 > 0.0 && p.lambda2 > 0.0)) throw InvalidGeometry("bubble scales must be positive");
  if (!(p.r1 >= p.lambda1)) throw InvalidGeometry("need r1 >= lambda1");
  if (!(p.a >= p.lambda2)) throw InvalidGeometry("need a >= lambda2");
  if (!(p.sigma >= 1.0)) throw InvalidGeometry("need sigma >= 1");
  // open balls: touching at one point still counts as disjoint
  if (distance(p.xi1, p.xi2) < p.r1 + p.a) throw InvalidGeometry("balls B(xi1, r1) and B(xi2, a) overlap");
}

bool thmB_condition(const ThmBParams& p, Dim n) {
  validate(p, n);
  const double lhs = std::pow(p.lambda2 / p.lambda1, 2);
  return lhs >= std::pow(8.0, n.n()) * n.n() * std::pow(distance(p.xi1, p.xi2) / p.r1, 4) * (p.sigma * p.sigma + 6.0);
}

double thmB_chain_bound(const ThmBParams& p, Dim n) {
  validate(p, n);
  const int d = n.n();
  const double c = p.r1 / p.lambda1;
  const double k = p.a / p.lambda2;
  const double C = distance(p.xi1, p.xi2) / p.lambda2;
  const double t = std::pow(p.lambda1 / p.lambda2, 2);
  const double ce = n.critical_exponent();
  const double bracket = k * k * t / std::pow(t + C * C, 2) +
                         (d + 2.0) / (d * (d - 2.0)) * std::pow(8.0, -d) * k * k * t * std::pow(c / C, 4) -
                         4.0 * k * k - 2.0 * ce / (k * k);
  return (d - 2.0) / (2.0 * d) * bracket;
}

double thmB_bound(double sigma, Dim n) { return (n.n() + 2.0) / (2.0 * n.n()) * sigma * sigma; }

double deep_bubble_bound(double kappa, double dist, double r1, Dim n) {
  const KBounds kb = combined_k_bounds(kappa, n);
  if (!(dist > 0.0 && dist <= 1.0)) throw InvalidInput("deep_bubble_bound needs 0 < dist <= 1");
  if (!(r1 > 0.0)) throw InvalidInput("deep_bubble_bound needs r1 > 0");
  const int d = n.n();
  const double sigma2 = 2.0 * d / (d + 2.0) * kb.hi;
  return std::pow(8.0, d) * d * std::pow(dist / r1, 4) * (sigma2 + 6.0);
}

}  // namespace bubbleforge
