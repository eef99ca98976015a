#pragma once

#include <functional>

#include "bubbleforge/field.hpp"

namespace bubbleforge {

/// Spherical solution (lambda / (lambda^2 + |x - center|^2))^((n-2)/2) of
/// Delta u + n(n-2) u^((n+2)/(n-2)) = 0 in R^n.
class Bubble {
 public:
  Bubble(double lambda, const Vec& center);

  double lambda() const { return lambda_; }
  const Vec& center() const { return center_; }
  int dim() const { return center_.dim(); }

 private:
  double lambda_;
  Vec center_;
};

double bubble_value(const Bubble& b, const Vec& x);

struct BubbleDerivatives {
  Vec gradient;
  double laplacian = 0.0;
};

/// Closed-form gradient; the Laplacian is -n(n-2) u^((n+2)/(n-2)).
BubbleDerivatives bubble_derivatives(const Bubble& b, const Vec& x);

Field bubble_field(const Bubble& b);

/// Pointwise sum f + g.
Field sum_field(const Field& f, const Field& g);

/// v_b(x) = (|x|^2 + 1)^((2-n)/4).
Field base_field(Dim n);

/// |x - center|^exponent on R^n \ {center}. Test fixture for singular profiles
/// and slow-decay inputs.
Field power_field(const Vec& center, double exponent);

/// x -> f(shift + x).
Field translated_field(const Field& f, const Vec& shift);

/// K = -Delta u / (n(n-2) u^((n+2)/(n-2))) from a jet.
/// Throws NonpositiveValue when the value is not positive.
double k_from_jet(const Jet& j, int n);

/// K-function with analytic derivatives.
double k_function(const Field& f, const Vec& x);

/// K-function with a (2n+1)-point finite-difference Laplacian of step h.
double k_function_fd(const Field& f, const Vec& x, double h);

using ScalarFn = std::function<double(const Vec&)>;

/// Central-difference gradient, O(h^2).
Vec fd_gradient(const ScalarFn& g, const Vec& x, double h);
/// Second-order (2n+1)-point Laplacian stencil.
double fd_laplacian(const ScalarFn& g, const Vec& x, double h);

/// Length over which f changes appreciably near x: min(u/|grad u|, sqrt(u/|lap u|)).
double local_length_scale(const Field& f, const Vec& x);

/// Limit of K at infinity for a sum of two bubbles with scales l1, l2.
double k_sum_limit(double lambda1, double lambda2, Dim n);

/// |grad (u^(-2/(n-2)))|^2 for a general field.
double grad_inv_power_sq(const Field& f, const Vec& x);

/// Closed form 4 |x - center|^2 / lambda^2 of the same quantity for a bubble.
double grad_inv_power(const Bubble& b, const Vec& x);

struct Identity34 {
  double lhs = 0.0;       ///< Delta(u^(-4/(n-2))) by finite differences
  double rhs = 0.0;       ///< 4n K + (n+2) |grad u^(-2/(n-2))|^2, analytic
  double residual = 0.0;  ///< lhs - rhs
  double scale = 1.0;     ///< max(1, |lhs|, |rhs|, |4nK|), the size the residual is judged against
};

/// Both sides of Delta(u^(-4/(n-2))) = 4nK + (n+2)|grad u^(-2/(n-2))|^2.
/// h <= 0 selects 1e-4 times the local length scale.
Identity34 identity_3_4(const Field& f, const Vec& x, double h = 0.0);
double identity_3_4_residual(const Field& f, const Vec& x, double h = 0.0);

/// K-function of the base field, (1/2)(1 - (n+2)/(2n) |x|^2/(|x|^2+1)).
double base_k(const Vec& x, Dim n);

struct KBounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Range of the K-function of v + v_b when |K_v - 1| <= kappa^2.
/// Throws KappaTooLarge if kappa^2 >= 1.
KBounds combined_k_bounds(double kappa, Dim n);

}  // namespace bubbleforge
