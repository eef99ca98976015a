#include "bubbleforge/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bubbleforge {

double h_eval(const Kernel& k, const Vec& x, const Vec& xi) {
  const double r = distance(x, xi);
  if (r == 0.0) throw Coincident("H(x, xi) is singular at x == xi");
  return std::pow(r, 2 - k.n) / ((2 - k.n) * k.omega_n);
}

Vec h_grad(const Kernel& k, const Vec& x, const Vec& xi) {
  const Vec d = x - xi;
  const double r = d.norm();
  if (r == 0.0) throw Coincident("grad H is singular at x == xi");
  return d * (std::pow(r, -k.n) / k.omega_n);
}

QuadResult int_absH_ball(const Kernel& k, double R, const Vec& xi, const QuadOptions& opt) {
  if (!(R > 0.0)) throw BadRadii("int_absH_ball needs R > 0");
  if (!(xi.norm() < R)) throw InvalidInput("int_absH_ball needs |xi| < R");
  const PolarRegion reg{{Vec::zeros(k.n), R}, std::nullopt, 0.0, -1.0};
  return integrate_polar([&](const Vec& x) { return -h_eval(k, x, xi); }, xi, reg, opt);
}

double absH_ball_exact(int n, double R, const Vec& xi) {
  return R * R / (2.0 * (n - 2)) - xi.norm2() / (2.0 * n);
}

QuadResult int_absH_annulus(const Kernel& k, double rho, double R, const QuadOptions& opt) {
  if (!(rho > 0.0 && rho < R)) throw BadRadii("int_absH_annulus needs 0 < rho < R");
  const Vec o = Vec::zeros(k.n);
  const PolarRegion reg{{o, R}, std::nullopt, rho, -1.0};
  return integrate_polar([&](const Vec& x) { return -h_eval(k, x, o); }, o, reg, opt);
}

QuadResult weighted_grad_integral(const Kernel& k, const Field& f, const Ball& region, const Vec& xi,
                                  const QuadOptions& opt) {
  const PolarRegion reg{region, std::nullopt, 0.0, -1.0};
  return integrate_polar([&](const Vec& x) { return -h_eval(k, x, xi) * grad_inv_power_sq(f, x); }, xi, reg, opt);
}

RepIdentity rep_identity(const Field& u_c, const Bubble& u2, const Ball& omega2, const Vec& xi, const QuadOptions& opt) {
  const int n = u_c.dim();
  const Kernel k{Dim(n)};
  if (!omega2.contains(xi)) throw InvalidInput("rep_identity needs xi inside omega2");
  const PolarRegion reg{omega2, std::nullopt, 0.0, -1.0};
  RepIdentity out;
  out.lhs_integral =
      integrate_polar([&](const Vec& x) { return h_eval(k, x, xi) * (k_function(u_c, x) - 1.0); }, xi, reg, opt);
  out.grad_integral = integrate_polar(
      [&](const Vec& x) { return -h_eval(k, x, xi) * (grad_inv_power_sq(u_c, x) - grad_inv_power(u2, x)); }, xi,
      reg, opt);
  const double q = -4.0 / (n - 2);
  out.lhs = 4.0 * n * out.lhs_integral.value;
  out.rhs = std::pow(u_c.value(xi), q) - std::pow(bubble_value(u2, xi), q) + (n + 2.0) * out.grad_integral.value;
  out.residual = out.lhs - out.rhs;
  out.err_est = 4.0 * n * out.lhs_integral.err_est + (n + 2.0) * out.grad_integral.err_est;
  return out;
}

double rep_identity_residual(const Field& u_c, const Bubble& u2, const Ball& omega2, const Vec& xi,
                             const QuadOptions& opt) {
  return rep_identity(u_c, u2, omega2, xi, opt).residual;
}

void check_profile(const Field& u, const SingularProfile& prof) {
  const int n = u.dim();
  if (!(prof.mu > 0.0 && prof.mu < 1.0 && prof.nu > 0.0 && prof.nu < 1.0))
    throw InvalidInput("singular profile needs mu, nu in (0, 1)");
  if (!(prof.c1 > 0.0 && prof.c2 > 0.0 && prof.delta > 0.0))
    throw InvalidInput("singular profile needs positive constants");
  constexpr double slack = 1.0 + 1e-9;
  for (int axis = 0; axis < n; ++axis) {
    for (double sign : {-1.0, 1.0}) {
      for (int j = 0; j <= 12; ++j) {
        const double r = prof.delta * std::pow(10.0, -0.5 * j) * (1.0 - 1e-9);
        const Vec x = prof.p + Vec::unit(n, axis, sign * r);
        const Jet jt = u.jet(x);
        if (std::abs(jt.laplacian) > slack * prof.c1 * std::pow(r, -(n - 1 + prof.mu)) ||
            jt.gradient.norm() > slack * prof.c2 * std::pow(r, -(n - 1 - prof.nu)))
          throw ProfileViolated("singular profile bounds fail at " + x.str());
      }
    }
  }
}

namespace {

// C-infinity step: 1 for t <= 0, 0 for t >= 1.
double smooth_step_down(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - t));
  const double b = std::exp(-1.0 / t);
  return a / (a + b);
}

double boundary_term(const Kernel& k, const Field& u, const Ball& omega, const Vec& xi, const QuadOptions& opt,
                     double& err) {
  QuadOptions o = opt;
  if (o.angular_points <= 0) o.angular_points = k.n == 3 ? 48 : default_angular_points(k.n);
  const QuadResult q = integrate_sphere(
      [&](const Vec& x, const Vec& nrm) {
        const Jet j = u.jet(x);
        return j.value * h_grad(k, x, xi).dot(nrm) - h_eval(k, x, xi) * j.gradient.dot(nrm);
      },
      omega, o);
  err += q.err_est;
  return q.value;
}

}  // namespace

RepSingular rep_formula_singular(const Field& u, const std::optional<SingularProfile>& prof, const Ball& omega,
                                 const Vec& xi, const std::vector<double>& epsilons, const QuadOptions& opt_in) {
  const int n = u.dim();
  const Kernel k{Dim(n)};
  if (!omega.contains(xi)) throw InvalidInput("rep_formula_singular needs xi inside omega");
  // the cutoff around xi is a sharp angular feature seen from p
  QuadOptions opt = opt_in;
  if (opt.angular_points <= 0 && n == 3) opt.angular_points = 64;
  RepSingular out;
  const double u_xi = u.value(xi);
  const auto lap_h = [&](const Vec& x) { return h_eval(k, x, xi) * u.laplacian(x); };

  if (!prof) {
    RepSingularLevel lv;
    const PolarRegion reg{omega, std::nullopt, 0.0, -1.0};
    const QuadResult v = integrate_polar(lap_h, xi, reg, opt);
    lv.volume = v.value;
    lv.err_est = v.err_est;
    lv.boundary = boundary_term(k, u, omega, xi, opt, lv.err_est);
    lv.residual = lv.volume + lv.boundary - u_xi;
    out.levels.push_back(lv);
    out.extrapolated = lv.residual;
    return out;
  }

  check_profile(u, *prof);
  const Vec& p = prof->p;
  if (!omega.contains(p)) throw InvalidInput("singular point must lie inside omega");
  const double d_xp = distance(xi, p);
  if (d_xp == 0.0) throw Coincident("xi coincides with the singular point");
  const double d_bd = omega.radius - distance(xi, omega.center);
  const double s = 0.5 * std::min(d_xp, d_bd);

  // chi(|x - xi|) H Delta u, polar about xi inside B(xi, s)
  const auto chi = [&](const Vec& x) { return smooth_step_down(2.0 * distance(x, xi) / s - 1.0); };
  const QuadResult near_xi =
      integrate_polar([&](const Vec& x) { return chi(x) * lap_h(x); }, xi, {omega, std::nullopt, 0.0, s}, opt);
  double bd_err = 0.0;
  const double boundary = boundary_term(k, u, omega, xi, opt, bd_err);

  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps < 0.5 * d_xp)) throw InvalidInput("excluded radius must be below half of |xi - p|");
    QuadOptions o = opt;
    // geometric breaks resolve the r^(-mu) growth toward the excluded sphere
    for (double b = 2.0 * eps; b < 2.0 * omega.radius; b *= 2.0) o.radial_breaks.push_back(b);
    const QuadResult far = integrate_polar(
        [&](const Vec& x) {
          const double w = 1.0 - chi(x);
          return w == 0.0 ? 0.0 : w * lap_h(x);
        },
        p,
                                           {omega, std::nullopt, eps, -1.0}, o);
    RepSingularLevel lv;
    lv.epsilon = eps;
    lv.volume = near_xi.value + far.value;
    lv.boundary = boundary;
    lv.err_est = near_xi.err_est + far.err_est + bd_err;
    lv.residual = lv.volume + lv.boundary - u_xi;
    QuadOptions so = opt;
    so.angular_points = 0;
    lv.excluded = integrate_sphere(
                      [&](const Vec& x, const Vec& nrm) {
                        const Vec inward = -nrm;
                        const Jet j = u.jet(x);
                        return h_eval(k, x, xi) * j.gradient.dot(inward) - j.value * h_grad(k, x, xi).dot(inward);
                      },
                      {p, eps}, so)
                      .value;
    out.levels.push_back(lv);
  }

  const auto& L = out.levels;
  if (L.size() >= 2) {
    const std::size_t a = L.size() - 2, b = L.size() - 1;
    const double q = std::log(L[a].epsilon / L[b].epsilon);
    out.order = std::log(std::abs(L[a].residual / L[b].residual)) / q;
    out.excluded_order = std::log(std::abs(L[a].excluded / L[b].excluded)) / q;
    if (L.size() >= 3) {
      const double d1 = L[a - 1].residual - L[a].residual;
      const double d2 = L[a].residual - L[b].residual;
      if (d2 != 0.0 && d1 / d2 > 0.0) {
        const double rate = std::log(d1 / d2) / q;  // order from successive differences
        out.order = rate;
        out.extrapolated = L[b].residual - d2 / (std::exp(rate * q) - 1.0);
      } else {
        out.extrapolated = L[b].residual;
      }
    } else {
      out.extrapolated = L[b].residual - (L[a].residual - L[b].residual) / (std::exp(out.order * q) - 1.0);
    }
  } else if (!L.empty()) {
    out.extrapolated = L.front().residual;
  }
  return out;
}

}  // namespace bubbleforge
