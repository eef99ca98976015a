#pragma once

#include <optional>
#include <vector>

#include "bubbleforge/field_core.hpp"
#include "bubbleforge/quadrature.hpp"

namespace bubbleforge {

/// Free-space fundamental solution H(x, xi) = |x - xi|^(2-n) / ((2-n) omega_n),
/// omega_n the area of the unit sphere, so that Delta H = delta_xi.
struct Kernel {
  explicit Kernel(Dim d) : n(d.n()), omega_n(unit_sphere_area(d.n())) {}
  int n;
  double omega_n;
};

/// Throws Coincident when x == xi.
double h_eval(const Kernel& k, const Vec& x, const Vec& xi);
/// Gradient of H in x: (x - xi) / (omega_n |x - xi|^n).
Vec h_grad(const Kernel& k, const Vec& x, const Vec& xi);

/// Integral of |H(., xi)| over B(0, R), polar about xi. Requires |xi| < R.
QuadResult int_absH_ball(const Kernel& k, double R, const Vec& xi, const QuadOptions& opt = {});

/// Closed form R^2/(2(n-2)) - |xi|^2/(2n) of the same integral.
double absH_ball_exact(int n, double R, const Vec& xi);

/// Integral of |H(., 0)| over B(0,R) \ B(0,rho). Throws BadRadii unless 0 < rho < R.
QuadResult int_absH_annulus(const Kernel& k, double rho, double R, const QuadOptions& opt = {});

/// Integral of |H(., xi)| |grad f^(-2/(n-2))|^2 over the ball.
QuadResult weighted_grad_integral(const Kernel& k, const Field& f, const Ball& region, const Vec& xi,
                                  const QuadOptions& opt = {});

struct RepIdentity {
  QuadResult lhs_integral;   ///< integral of H (K - 1)
  QuadResult grad_integral;  ///< integral of |H| (|grad u_c^q|^2 - |grad u_2^q|^2), q = -2/(n-2)
  double lhs = 0.0;          ///< 4n times the first
  double rhs = 0.0;
  double residual = 0.0;     ///< lhs - rhs
  double err_est = 0.0;      ///< propagated quadrature error of the residual
};

/// Both sides of
///   4n int H (K - 1) = u_c^(-4/(n-2))(xi) - u_2^(-4/(n-2))(xi)
///                      + (n+2) int |H| (|grad u_c^(-2/(n-2))|^2 - |grad u_2^(-2/(n-2))|^2)
/// over omega2, for u_c equal to a bubble near xi and to u2 outside omega2.
RepIdentity rep_identity(const Field& u_c, const Bubble& u2, const Ball& omega2, const Vec& xi,
                         const QuadOptions& opt = {});
double rep_identity_residual(const Field& u_c, const Bubble& u2, const Ball& omega2, const Vec& xi,
                             const QuadOptions& opt = {});

/// Near-singularity bounds |Delta u| <= c1 / r^(n-1+mu), |grad u| <= c2 / r^(n-1-nu)
/// on B(p, delta) \ {p}, r = |x - p|.
struct SingularProfile {
  Vec p;
  double mu = 0.5, nu = 0.5;
  double c1 = 1.0, c2 = 1.0;
  double delta = 0.1;
};

/// Samples the bounds on rays out of p; throws ProfileViolated on failure.
void check_profile(const Field& u, const SingularProfile& prof);

struct RepSingularLevel {
  double epsilon = 0.0;
  double volume = 0.0;      ///< int over omega \ B(p, eps) of H Delta u
  double boundary = 0.0;    ///< int over d(omega) of u dH/dn - H du/dn
  double excluded = 0.0;    ///< int over dB(p, eps) of H du/dn - u dH/dn, normal toward p
  double residual = 0.0;    ///< volume + boundary - u(xi)
  double err_est = 0.0;
};

struct RepSingular {
  std::vector<RepSingularLevel> levels;
  double order = 0.0;         ///< observed convergence order of the residual
  double extrapolated = 0.0;  ///< Richardson limit of the residual as eps -> 0
  double excluded_order = 0.0;
};

/// Representation formula u(xi) = int H Delta u + boundary terms with a
/// shrinking ball removed around the profile's singular point. Without a
/// profile the classical formula is evaluated once (eps = 0).
RepSingular rep_formula_singular(const Field& u, const std::optional<SingularProfile>& prof, const Ball& omega,
                                 const Vec& xi, const std::vector<double>& epsilons = {1e-2, 1e-3, 1e-4},
                                 const QuadOptions& opt = {});

}  // namespace bubbleforge
