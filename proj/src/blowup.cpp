#include "bubbleforge/blowup.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace bubbleforge {

double d_eps(const Vec& x, double epsilon) {
  const double r = x.norm();
  return std::min(r - epsilon, kOuterRadius - r);
}

namespace {

void check_input(const BlowupInput& inp) {
  if (!(inp.epsilon > 0.0 && inp.epsilon < kOuterRadius)) throw InvalidInput("blowup needs 0 < eps < 5/8");
  if (!(inp.R > 0.0)) throw InvalidInput("blowup needs a positive fit radius");
}

int scan_points(int n) {
  switch (n) {
    case 3: return 64;
    case 4: return 24;
    case 5: return 14;
    default: return 10;
  }
}

int fit_points(int n) {
  switch (n) {
    case 3: return 13;
    case 4: return 9;
    case 5: return 7;
    default: return 5;
  }
}

class RescaledField final : public FieldImpl {
 public:
  RescaledField(Field u, Vec c, double lambda, double window)
      : u_(std::move(u)), c_(c), lambda_(lambda), window_(window), h_(0.5 * (c.dim() - 2)) {}
  int dim() const override { return c_.dim(); }
  Jet jet(const Vec& x) const override {
    if (x.norm() > window_ * (1.0 + 1e-12)) throw OutOfDomain("rescaled field evaluated outside its window at " + x.str());
    Jet j = u_.jet(c_ + x * lambda_);
    const double s = std::pow(lambda_, h_);
    j.value *= s;
    j.gradient *= s * lambda_;
    j.laplacian *= s * lambda_ * lambda_;
    return j;
  }
  Domain domain() const override { return Domain::ball(Vec::zeros(c_.dim()), window_ * (1.0 + 1e-12)); }

 private:
  Field u_;
  Vec c_;
  double lambda_, window_, h_;
};

// Samples of B(0, R) on a masked product grid; always includes the origin.
std::vector<Vec> ball_samples(int n, double R, int m) {
  if (m % 2 == 0) ++m;
  const GridSpec gs{m, 2, {}, false};
  const RegionGrid rg = region_grid(BallRegion{Vec::zeros(n), R}, n, gs);
  std::vector<Vec> out;
  std::vector<double> p(n);
  for (std::size_t k = 0; k < rg.grid.size(); ++k) {
    rg.grid.params(k, p);
    if (auto x = rg.map(p)) out.push_back(*x);
  }
  return out;
}

}  // namespace

WeightedMax weighted_max(const BlowupInput& inp) {
  check_input(inp);
  const int n = inp.field.dim();
  const Dim dim(n);
  GridSpec gs = inp.grid;
  if (gs.points_per_axis <= 0) gs.points_per_axis = scan_points(n);
  // U peaks once per bubble, so the nearest node brackets the peak within one
  // cell at every level; 9^n nodes per level instead of 41^n
  if (gs.refine.levels == RefineOptions{}.levels) {
    gs.refine.factor = 4;
    gs.refine.window_cells = 1;
    gs.refine.levels = 7;
  }
  RegionGrid rg = region_grid(BallRegion{Vec::zeros(n), kOuterRadius}, n, gs);
  const double eps = inp.epsilon;
  const auto& excl = inp.excluded;
  rg.map = [inner = rg.map, eps, &excl](std::span<const double> p) -> std::optional<Vec> {
    auto x = inner(p);
    if (!x || d_eps(*x, eps) <= 0.0) return std::nullopt;
    for (const Ball& b : excl)
      if (b.contains(*x)) return std::nullopt;
    return x;
  };
  const double h = dim.half();
  const Field& u = inp.field;
  const auto U = [&](const Vec& x) { return std::pow(d_eps(x, eps), h) * u.value(x); };
  const RefinedScan rs = scan_max_refined(rg.grid, rg.map, U, gs.refine);
  if (!rs.hit.found) throw InvalidInput("blowup search region is empty");
  return {rs.hit.point, rs.hit.value, rs.n_samples};
}

Rescaled rescale(const BlowupInput& inp, const Vec& x_center) {
  check_input(inp);
  const int n = inp.field.dim();
  const double d = d_eps(x_center, inp.epsilon);
  if (!(d > 0.0)) throw OutOfDomain("rescaling center lies outside the annulus");
  const double u0 = inp.field.value(x_center);
  if (!(u0 > 0.0)) throw NonpositiveValue("field is not positive at the rescaling center");
  const double lambda = std::pow(u0, -2.0 / (n - 2));
  const double window = 0.5 * d / lambda;
  return {Field::make<RescaledField>(inp.field, x_center, lambda, window), lambda, window};
}

BubbleFit fit_bubble(const Field& w, double R, int points_per_axis) {
  const int n = w.dim();
  const double h = 0.5 * (n - 2);
  const std::vector<Vec> xs = ball_samples(n, R, points_per_axis > 0 ? points_per_axis : fit_points(n));
  const auto m = static_cast<Eigen::Index>(xs.size());
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) target[i] = w.value(xs[i]);

  // parameters: theta[0] = log mu, theta[1..n] = y
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n + 1);
  const auto model = [&](const Eigen::VectorXd& th, Eigen::VectorXd& res, Eigen::MatrixXd* J) {
    const double mu = std::exp(th[0]);
    Vec y(n);
    for (int i = 0; i < n; ++i) y[i] = th[i + 1];
    for (Eigen::Index k = 0; k < m; ++k) {
      const Vec d = xs[k] - y;
      const double s = d.norm2();
      const double v = std::pow(mu / (mu * mu + s), h);
      res[k] = v - target[k];
      if (J) {
        (*J)(k, 0) = v * h * (s - mu * mu) / (mu * mu + s);
        const double g = 2.0 * h * v / (mu * mu + s);  // d v / d y = g (x - y)
        for (int i = 0; i < n; ++i) (*J)(k, i + 1) = g * d[i];
      }
    }
    return res.squaredNorm();
  };

  BubbleFit fit;
  Eigen::VectorXd res(m), trial_res(m);
  Eigen::MatrixXd J(m, n + 1);
  double cost = model(theta, res, &J);
  for (int it = 0; it < 100; ++it) {
    fit.iterations = it + 1;
    const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-res);
    double t = 1.0;
    Eigen::VectorXd trial = theta + step;
    double trial_cost = model(trial, trial_res, nullptr);
    while (trial_cost > cost && t > 1e-6) {
      t *= 0.5;
      trial = theta + t * step;
      trial_cost = model(trial, trial_res, nullptr);
    }
    if (!(trial_cost <= cost)) break;
    theta = trial;
    if (std::abs(theta[0]) > std::log(1e6)) throw FitDiverged("bubble fit left mu in [1e-6, 1e6]");
    const bool done = (t * step).norm() < 1e-14 * (1.0 + theta.norm()) || trial_cost == 0.0;
    cost = model(theta, res, &J);
    if (done) break;
  }
  if (!std::isfinite(theta[0]) || std::abs(theta[0]) > std::log(1e6))
    throw FitDiverged("bubble fit left mu in [1e-6, 1e6]");

  fit.mu = std::exp(theta[0]);
  fit.y_o = Vec(n);
  for (int i = 0; i < n; ++i) fit.y_o[i] = theta[i + 1];
  const Bubble b(fit.mu, fit.y_o);
  for (const Vec& x : xs) {
    const Jet j = w.jet(x);
    const BubbleDerivatives bd = bubble_derivatives(b, x);
    const double dev = std::abs(j.value - bubble_value(b, x)) + (j.gradient - bd.gradient).norm() +
                       std::abs(j.laplacian - bd.laplacian);
    fit.delta_measured = std::max(fit.delta_measured, dev);
  }
  return fit;
}

std::optional<BubbleReport> detect(const BlowupInput& inp) {
  const int n = inp.field.dim();
  const WeightedMax wm = weighted_max(inp);
  BubbleReport rep;
  rep.x_o = wm.x_o;
  rep.M_eps = wm.M_eps;
  rep.lambda_consistency = d_eps(wm.x_o, inp.epsilon) / std::pow(wm.M_eps, 2.0 / (n - 2));
  try {
    Rescaled r = rescale(inp, wm.x_o);
    if (inp.R > r.window) return std::nullopt;
    BubbleFit fit = fit_bubble(r.w, inp.R);
    rep.x_1 = wm.x_o;
    // move to the fitted center when it is close, then refit there
    const Vec x1 = wm.x_o + fit.y_o * r.lambda;
    if (distance(x1, wm.x_o) <= inp.shift_radius * r.lambda) {
      Rescaled r1 = rescale(inp, x1);
      if (inp.R <= r1.window) {
        const BubbleFit f1 = fit_bubble(r1.w, inp.R);
        if (f1.delta_measured <= fit.delta_measured) {
          r = r1;
          fit = f1;
          rep.x_1 = x1;
        }
      }
    }
    rep.lambda = r.lambda;
    rep.mu = fit.mu;
    rep.y_o = fit.y_o;
    rep.delta_measured = fit.delta_measured;
    rep.shift = distance(rep.x_1, rep.x_o);
  } catch (const FitDiverged&) {
    return std::nullopt;
  } catch (const OutOfDomain&) {
    return std::nullopt;
  }
  if (!(rep.delta_measured < inp.delta_target)) return std::nullopt;
  return rep;
}

std::vector<BubbleReport> detect_all(BlowupInput inp, int max_bubbles) {
  std::vector<BubbleReport> out;
  const int n = inp.field.dim();
  const int m = inp.grid.points_per_axis > 0 ? inp.grid.points_per_axis : scan_points(n);
  // B(x_1, lambda R) alone is far below the coarse spacing; the coarse pass
  // would land on the tail of the bubble just removed
  const double min_radius = 3.0 * 2.0 * kOuterRadius / (m - 1);
  for (int i = 0; i < max_bubbles; ++i) {
    const auto rep = detect(inp);
    if (!rep) break;
    inp.excluded.push_back({rep->x_1, std::max(rep->lambda * inp.R, min_radius)});
    out.push_back(*rep);
  }
  return out;
}

}  // namespace bubbleforge
