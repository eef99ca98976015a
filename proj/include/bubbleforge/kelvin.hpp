#pragma once

#include "bubbleforge/field_core.hpp"

namespace bubbleforge {

/// Inversion in the sphere of the given center and radius a:
/// x -> center + a^2 (x - center) / |x - center|^2.
class Inversion {
 public:
  Inversion(const Vec& center, double radius);
  static Inversion unit(int n) { return {Vec::zeros(n), 1.0}; }

  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  int dim() const { return center_.dim(); }

 private:
  Vec center_;
  double radius_;
};

/// Throws AtCenter at the inversion center.
Vec invert_point(const Inversion& inv, const Vec& x);

/// Kelvin transform x -> (a/|x-c|)^(n-2) f(invert_point(x)). Derivatives are
/// exact: the gradient by the chain rule through the inversion, the Laplacian
/// by Delta(Kf)(x) = (a/|x-c|)^(n+2) (Delta f)(invert_point(x)), so that the
/// K-function of the image is K composed with the inversion.
///
/// At the center itself the image is defined only when f declares a
/// Newtonian decay coefficient L (bubbles, sums of bubbles, disjoint glues):
/// the value is the continuous extension L a^(2-n). Otherwise AtCenter.
Field kelvin_field(const Field& f, const Inversion& inv);

/// Closed-form bubble image: scale a^2 lambda / (lambda^2 + |xi|^2) and center
/// a^2 xi / (lambda^2 + |xi|^2), with xi measured from the inversion center.
Bubble kelvin_bubble(const Bubble& b, const Inversion& inv);

/// Given the unit (origin, radius one) Kelvin image u~ of some u, returns the
/// Kelvin transform of u about inv2 written through u~ alone:
///   (a/|x-c|)^(n-2) |Y|^(2-n) u~(Y/|Y|^2),  Y = c + a^2 (x-c)/|x-c|^2.
/// At x = c the value is the limit a^(2-n) u~(0).
Field lemma_5_4_compose(const Field& unit_image, const Inversion& inv2);

}  // namespace bubbleforge
