#pragma once

#include "bubbleforge/field_core.hpp"
#include "bubbleforge/scan.hpp"  // sup_scan

namespace bubbleforge {

/// Truth values of the two alternative hypotheses of the concentric lower bound.
struct ThmAConditions {
  bool cond1 = false;  ///< l1/l2 <= (rho^2/R^2) / (1 + l2^2/R^2)
  bool cond2 = false;  ///< l1^2/l2^2 >= 3(n+2)/(2(n-2)) (1 + R^4/l2^4)
  bool any() const { return cond1 || cond2; }
};

/// Inner bubble scale l1 inside B(0, rho), outer scale l2 outside B(0, R).
/// Throws BadRadii unless 0 < rho < R, InvalidInput for nonpositive scales.
ThmAConditions thmA_conditions(double l1, double l2, double rho, double R, Dim n);

/// The same hypotheses after inversion in the sphere of radius rho:
///   l1/l2 <= (rho^2/R^2) / (1 + rho^2/l1^2),
///   l1^2/l2^2 >= 3(n+2)/(2(n-2)) (1 + l1^4/rho^4).
/// Equal to thmA_conditions(rho^2/l2, rho^2/l1, rho^2/R, rho).
ThmAConditions thmA_dual_conditions(double l1, double l2, double rho, double R, Dim n);

/// Lower bound for sup |K - 1| on the transition annulus:
/// (n-2)/(2n) {l1^2 - l2^2 + (n+2)/(n-2) [rho^4/l1^2 - R^4/l2^2]} / (R^2 - rho^2).
double lower_bound_4_4(double l1, double l2, double rho, double R, Dim n);

struct DepthFactors {
  double k1 = 0.0;  ///< rho / l1
  double k2 = 0.0;  ///< R / l2
  double nu = 0.0;  ///< ((k1^2 + 1) / k1^2)^((n-2)/2), > 1
};

DepthFactors depth_factors(double l1, double l2, double rho, double R, Dim n);

/// (u1(0) / u1(rho))^(2/(n-2)), which equals 1 + k1^2.
double depth_ratio(double l1, double rho, Dim n);

/// l2/l1 <= k1^2 / (k2^2 + 1): the first hypothesis in depth-factor form.
bool depth_condition(const DepthFactors& d, double l1, double l2);

/// u2(R) >= nu u1(rho): the first hypothesis as a comparison of bubble values.
bool value_condition(double l1, double l2, double rho, double R, Dim n);

struct ThmBParams {
  double lambda1 = 0.0, lambda2 = 0.0;
  double r1 = 0.0, a = 0.0;
  Vec xi1, xi2;
  double sigma = 1.0;
};

/// Throws InvalidGeometry unless B(xi1, r1), B(xi2, a) are disjoint, r1 >= lambda1,
/// a >= lambda2 and sigma >= 1.
void validate(const ThmBParams& p, Dim n);

/// lambda2^2/lambda1^2 >= 8^n n |xi1 - xi2|^4 / r1^4 (sigma^2 + 6).
bool thmB_condition(const ThmBParams& p, Dim n);

/// Explicit lower bound for sup |K - 1| outside B(xi2, a) with
/// c = r1/l1, k = a/l2, C = |xi1 - xi2|/l2:
/// (n-2)/(2n) [k^2 t/(t + C^2)^2 + (n+2)/(n(n-2)) 8^-n k^2 t c^4/C^4 - 4k^2 - 2(n+2)/((n-2)k^2)],
/// t = l1^2/l2^2. |xi1| stands in for |xi| in the outer-bubble term.
double thmB_chain_bound(const ThmBParams& p, Dim n);

/// The bound (n+2)/(2n) sigma^2 that the hypothesis guarantees.
double thmB_bound(double sigma, Dim n);

/// Largest lambda2^2/lambda1^2 compatible with sup |K - 1| <= hi, hi the upper
/// end of combined_k_bounds(kappa), read off the contrapositive:
/// sigma^2 = 2n/(n+2) hi, bound = 8^n n (dist/r1)^4 (sigma^2 + 6).
/// Throws KappaTooLarge, or InvalidInput unless 0 < dist <= 1 and r1 > 0.
double deep_bubble_bound(double kappa, double dist, double r1, Dim n);

}  // namespace bubbleforge
