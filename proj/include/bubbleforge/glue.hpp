#pragma once

#include <optional>
#include <variant>

#include "bubbleforge/field_core.hpp"
#include "bubbleforge/scan.hpp"

namespace bubbleforge {

/// C^2 radial transition: 1 on [0, r_in], 0 on [r_out, inf), reversed quintic
/// smoothstep in between.
class Cutoff {
 public:
  static constexpr double kFirstBound = 15.0 / 8.0;            // max |s'| on [0,1]
  static constexpr double kSecondBound = 5.773502691896258;    // 10/sqrt(3), max |s''|

  Cutoff(double r_in, double r_out);

  double r_in() const { return r_in_; }
  double r_out() const { return r_out_; }
  double width() const { return r_out_ - r_in_; }
  /// Single constant with |phi'| <= c/w and |phi''| <= c/w^2.
  double c_phi() const { return kSecondBound; }

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;

  /// Jet of x -> phi(|x - center|); Delta phi = phi'' + (n-1) phi'/r.
  Jet radial_jet(const Vec& x, const Vec& center) const;

 private:
  double r_in_, r_out_;
};

/// Throws BadRadii unless 0 < r_in < r_out.
Cutoff make_cutoff(double r_in, double r_out);

struct ConcentricConfig {
  Bubble b1, b2;  ///< common center
  double rho = 0.0, R = 0.0;
};

struct DisjointConfig {
  Bubble b1, b2;
  double r1 = 0.0, a = 0.0;
  /// Outer transition radii; default 2 r1 and 2 a.
  std::optional<double> r1_out, a_out;
};

struct InsertConfig {
  Field host;
  Vec x1;
  double lambda = 0.0;
  double rho_m = 0.0, rho_M = 0.0;
};

using GlueConfig = std::variant<ConcentricConfig, DisjointConfig, InsertConfig>;

/// phi u1 + (1 - phi) u2 with phi = make_cutoff(rho, R) about the common center.
/// Throws BadConfig.
Field glue_concentric(const ConcentricConfig& cfg);

/// (1 - phi_2(|x - xi_2|)) u1 + (1 - phi_1(|x - xi_1|)) u2. Equals u1 on
/// B(xi_1, r1), u2 on B(xi_2, a) and u1 + u2 off both transition balls.
/// Throws OverlapError if the outer balls meet, BadConfig for bad radii.
Field glue_disjoint(const DisjointConfig& cfg);

/// w(x) = phi(|x|) u_{lambda,0}(x) + (1 - phi(|x|)) host(x1 + x), phi on
/// [lambda rho_m, lambda rho_M]. Coordinates are centered at x1.
Field glue_bubble_into(const InsertConfig& cfg);

Field glue(const GlueConfig& cfg);

struct RhoMSolution {
  double rho_M = 0.0;
  double delta_bar = 0.0;
  double alpha = 0.0;
  double band_lo = 0.0;  ///< delta_bar^e + delta_bar^((n-2)/2)
  double band_hi = 0.0;  ///< 2 delta_bar^e
};

/// Exponent e = (n-2)(n-2-2 alpha) / (2(n+2)) of the admissible band.
double rho_band_exponent(double alpha, Dim n);

/// rho_M with (1/(1+rho_M^2))^((n-2)/2) at the geometric midpoint of
/// [band_lo, band_hi]. Throws InvalidInput unless delta in (0,1) and
/// 2(1+alpha) < n; NoSolution if the band is empty or reaches 1.
RhoMSolution solve_rho_M(double delta, double alpha, Dim n);

/// Inner transition radius: rho_M - 10, but never below rho_M / 2 so the
/// transition stays inside the band for moderate delta.
double rho_m_for(double rho_M);

/// Bubble u_{lambda,x1} plus delta lambda^((2-n)/2) (2 + sin((x - x1)_1 / lambda)) / 3.
Field perturbed_host(const Bubble& b, double delta);

/// Refined grid scan of |K - 1| over an annulus.
KReport kg_deviation(const Field& f, const AnnulusRegion& region, const GridSpec& spec = {});

struct InsertReport {
  RhoMSolution rho;
  double rho_m = 0.0;
  double epsilon = 0.0;  ///< sup |K_host - 1| on B(x1, lambda R)
  double sup_kg = 0.0;   ///< sup |K_g - 1| on the transition annulus
  double scale = 0.0;    ///< max(epsilon, delta_bar^alpha)
  double constant = 0.0; ///< sup_kg / scale
  double floor_min = 0.0;      ///< min of w^p lambda^((n+2)/2) sampled on the annulus
  double floor_bound = 0.0;    ///< delta_bar^((n-2)/2 - alpha)
  KReport report;
};

/// Plant u_{lambda,0} into the perturbed host and measure the constant in
/// |K_g - 1| <= C max(eps, delta_bar^alpha).
InsertReport glue_insert_experiment(Dim n, double delta, double alpha, double lambda, const GridSpec& spec = {});

}  // namespace bubbleforge
