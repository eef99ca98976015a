#include "bubbleforge/experiments.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bubbleforge/blowup.hpp"
#include "bubbleforge/bounds.hpp"
#include "bubbleforge/glue.hpp"
#include "bubbleforge/potential.hpp"

namespace bubbleforge {

namespace {

const std::vector<std::pair<Kind, std::string>>& kind_table() {
  static const std::vector<std::pair<Kind, std::string>> t{
      {Kind::thm_a, "thm-a"},         {Kind::thm_b, "thm-b"},
      {Kind::example_525, "example-525"}, {Kind::glue_insert, "glue-insert"},
      {Kind::lemma_37, "lemma-37"},   {Kind::rep_identity, "rep-identity"},
      {Kind::rep_singular, "rep-singular"}, {Kind::blowup, "blowup"}};
  return t;
}

// numeric knobs reachable by name from sweeps
using Setter = std::function<void(ExperimentConfig&, double)>;
#define BF_PARAM(name) {#name, [](ExperimentConfig& c, double v) { c.name = v; }}

const std::map<std::string, Setter>& param_table() {
  static const std::map<std::string, Setter> t{
      {"n",
       [](ExperimentConfig& c, double v) {
         if (v != std::floor(v)) throw ConfigError("n must be an integer");
         c.n = static_cast<int>(v);
       }},
      BF_PARAM(lambda1), BF_PARAM(lambda2), BF_PARAM(rho),    BF_PARAM(R),       BF_PARAM(lambda),
      BF_PARAM(sep),     BF_PARAM(sigma),   BF_PARAM(r1),     BF_PARAM(a),       BF_PARAM(dist),
      BF_PARAM(r1_width), BF_PARAM(a_width), BF_PARAM(delta), BF_PARAM(alpha),   BF_PARAM(stability),
      BF_PARAM(exponent), BF_PARAM(mu),     BF_PARAM(mu2),    BF_PARAM(epsilon), BF_PARAM(window),
      BF_PARAM(delta_target), BF_PARAM(tol)};
  return t;
}

#undef BF_PARAM

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ":" : "") + fmt(xs[i]);
  return s;
}

struct ParamList {
  std::string s;
  ParamList& add(const std::string& k, double v) {
    s += (s.empty() ? "" : ";") + k + "=" + fmt(v);
    return *this;
  }
  ParamList& add(const std::string& k, const std::vector<double>& v) {
    s += (s.empty() ? "" : ";") + k + "=" + join(v);
    return *this;
  }
};

Vec to_vec(const std::vector<double>& xs, int n, const char* what) {
  if (static_cast<int>(xs.size()) > n) throw ConfigError(std::string(what) + " has more coordinates than n");
  Vec v(n);
  for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<int>(i)] = xs[i];
  return v;
}

double default_tol(Kind k) {
  switch (k) {
    case Kind::thm_a:
    case Kind::thm_b: return 1e-9;
    case Kind::example_525: return 1e-6;
    case Kind::glue_insert: return 0.0;
    case Kind::lemma_37: return 1e-6;
    case Kind::rep_identity: return 1e-3;
    case Kind::rep_singular: return 1e-4;
    case Kind::blowup: return 1e-6;
  }
  return 0.0;
}

double tol_of(const ExperimentConfig& c) { return c.tol >= 0.0 ? c.tol : default_tol(c.kind); }

double exponent_of(const ExperimentConfig& c) { return std::isnan(c.exponent) ? 2.5 - c.n : c.exponent; }

double alpha_of(const ExperimentConfig& c) {
  if (c.alpha > 0.0) return c.alpha;
  // (n-4)/4 clipped into (0, (n-2)/2)
  const double hi = 0.5 * (c.n - 2);
  return std::clamp(0.25 * (c.n - 4), 0.0, hi * (1.0 - 1e-9));
}

GridSpec grid_of(const ExperimentConfig& c) {
  GridSpec g;
  g.points_per_axis = c.grid;
  return g;
}

class Clock {
 public:
  explicit Clock(bool on) : on_(on), t0_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto t = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(t - t0_).count();
    t0_ = t;
    return on_ ? s : 0.0;
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point t0_;
};

using Rows = std::vector<ReportRow>;

Rows run_thm_a(const ExperimentConfig& c, bool headline) {
  const Dim n(c.n);
  Clock clk(c.timing);
  const std::string params = ParamList{}
                                 .add("n", c.n)
                                 .add("lambda1", c.lambda1)
                                 .add("lambda2", c.lambda2)
                                 .add("rho", c.rho)
                                 .add("R", c.R)
                                 .s;
  const double target = (c.n + 2.0) / c.n;
  const double tol = tol_of(c);
  Rows rows;
  const double lb = lower_bound_4_4(c.lambda1, c.lambda2, c.rho, c.R, n);
  rows.push_back({"thm-a.bound44", params, lb, target, lb >= target - tol, clk.lap()});
  if (headline) return rows;
  const ThmAConditions cond = thmA_conditions(c.lambda1, c.lambda2, c.rho, c.R, n);
  rows.push_back({"thm-a.hypothesis", params, cond.cond1 ? 1.0 : (cond.cond2 ? 2.0 : 0.0), 1.0, cond.any(), clk.lap()});
  const Vec o = Vec::zeros(c.n);
  const Field u = glue_concentric({Bubble(c.lambda1, o), Bubble(c.lambda2, o), c.rho, c.R});
  const KReport rep = sup_scan(u, BallRegion{o, c.R}, grid_of(c));
  rows.push_back({"thm-a.scan", params, rep.sup_abs_dev, target, rep.sup_abs_dev >= target - tol, clk.lap()});
  return rows;
}

Rows run_thm_b(const ExperimentConfig& c, bool headline) {
  const Dim n(c.n);
  Clock clk(c.timing);
  const std::string params = ParamList{}
                                 .add("n", c.n)
                                 .add("sigma", c.sigma)
                                 .add("lambda1", c.lambda1)
                                 .add("lambda2", c.lambda2)
                                 .add("r1", c.r1)
                                 .add("a", c.a)
                                 .add("dist", c.dist)
                                 .s;
  const Vec xi2 = Vec::zeros(c.n);
  const Vec xi1 = Vec::unit(c.n, 0, c.dist);
  const ThmBParams p{c.lambda1, c.lambda2, c.r1, c.a, xi1, xi2, c.sigma};
  const double target = thmB_bound(c.sigma, n);
  const double tol = tol_of(c);
  const double r1_out = c.r1 + c.r1_width, a_out = c.a + c.a_width;
  const Field u = glue_disjoint({Bubble(c.lambda1, xi1), Bubble(c.lambda2, xi2), c.r1, c.a, r1_out, a_out});
  const double pad = 0.5;
  const double side = std::max(r1_out, a_out) + pad;
  Vec lo(c.n), hi(c.n);
  for (int i = 0; i < c.n; ++i) {
    lo[i] = -side;
    hi[i] = side;
  }
  lo[0] = -a_out - pad;
  hi[0] = c.dist + r1_out + pad;
  GridSpec g = grid_of(c);
  g.refine.levels = 3;
  g.use_radial_symmetry = false;
  const KReport rep = sup_scan(u, BoxRegion{lo, hi}, g);
  Rows rows{{"thm-b.scan", params, rep.sup_abs_dev, target, rep.sup_abs_dev >= target - tol, clk.lap()}};
  if (headline) return rows;
  const double lhs = std::pow(c.lambda2 / c.lambda1, 2);
  const double rhs = std::pow(8.0, c.n) * c.n * std::pow(c.dist / c.r1, 4) * (c.sigma * c.sigma + 6.0);
  rows.push_back({"thm-b.hypothesis", params, lhs, rhs, thmB_condition(p, n), clk.lap()});
  const double chain = thmB_chain_bound(p, n);
  rows.push_back({"thm-b.chain", params, chain, target, chain >= target - tol, clk.lap()});
  return rows;
}

Rows run_example_525(const ExperimentConfig& c, bool headline) {
  const Dim n(c.n);
  Clock clk(c.timing);
  const double l1 = c.unequal ? c.lambda1 : c.lambda;
  const double l2 = c.unequal ? c.lambda2 : c.lambda;
  ParamList pl;
  pl.add("n", c.n);
  if (c.unequal)
    pl.add("lambda1", l1).add("lambda2", l2);
  else
    pl.add("lambda", l1);
  const std::string params = pl.add("sep", c.sep).s;
  const double tol = tol_of(c);
  const Vec c1 = Vec::unit(c.n, 0, 0.5 * c.sep), c2 = Vec::unit(c.n, 0, -0.5 * c.sep);
  const Bubble b1(l1, c1), b2(l2, c2);
  const Field u = sum_field(bubble_field(b1), bubble_field(b2));
  const double equal_k = std::pow(2.0, 4.0 / (2.0 - c.n));

  // point on the axis where u1 = u2; the midpoint when the scales agree
  double t0 = 0.0;
  if (l1 != l2) {
    const auto gap = [&](double t) {
      const Vec x = Vec::unit(c.n, 0, t);
      return std::log(bubble_value(b1, x)) - std::log(bubble_value(b2, x));
    };
    boost::math::tools::eps_tolerance<double> stop(50);
    std::uintmax_t iters = 200;
    const auto br = boost::math::tools::toms748_solve(gap, -0.5 * c.sep, 0.5 * c.sep, stop, iters);
    t0 = 0.5 * (br.first + br.second);
  }
  const double k_eq = k_function(u, Vec::unit(c.n, 0, t0));
  Rows rows{{"example-525.equal-point", params, k_eq, equal_k, std::abs(k_eq - equal_k) <= tol, clk.lap()}};
  if (headline) return rows;

  const double side = 0.5 * c.sep + 3.0 * std::max(l1, l2);
  Vec lo(c.n), hi(c.n);
  for (int i = 0; i < c.n; ++i) {
    lo[i] = -side;
    hi[i] = side;
  }
  GridSpec g = grid_of(c);
  g.use_radial_symmetry = false;
  const KReport rep = sup_scan(u, BoxRegion{lo, hi}, g);
  const double cap = 1.0 - equal_k;
  rows.push_back({"example-525.sup", params, rep.sup_abs_dev, cap, rep.sup_abs_dev <= cap + tol, clk.lap()});

  const double far = 1e6 * std::max(l1, l2);
  const double k_far = k_function(u, Vec::unit(c.n, c.n - 1, far));
  const double lim = k_sum_limit(l1, l2, n);
  rows.push_back({"example-525.limit", params, k_far, lim, std::abs(k_far - lim) <= 1e-4, clk.lap()});
  return rows;
}

Rows run_glue_insert(const ExperimentConfig& c, bool headline) {
  const Dim n(c.n);
  Clock clk(c.timing);
  const double alpha = alpha_of(c);
  const std::string params = ParamList{}.add("n", c.n).add("delta", c.delta).add("alpha", alpha).s;
  const InsertReport a = glue_insert_experiment(n, c.delta, alpha, 1.0, grid_of(c));
  const InsertReport b = glue_insert_experiment(n, 0.1 * c.delta, alpha, 1.0, grid_of(c));
  const double ratio = std::max(a.constant, b.constant) / std::min(a.constant, b.constant);
  Rows rows{{"glue-insert.stability", params, ratio, c.stability, ratio <= c.stability, clk.lap()}};
  if (headline) return rows;
  rows.push_back({"glue-insert.constant", params, a.constant, a.sup_kg, std::isfinite(a.constant), 0.0});
  rows.push_back({"glue-insert.constant-tenth", ParamList{}.add("n", c.n).add("delta", 0.1 * c.delta).add("alpha", alpha).s,
                  b.constant, b.sup_kg, std::isfinite(b.constant), 0.0});
  rows.push_back({"glue-insert.floor", params, a.floor_min, a.floor_bound, a.floor_min >= a.floor_bound, 0.0});
  return rows;
}

Rows run_lemma_37(const ExperimentConfig& c, bool headline) {
  const Dim n(c.n);
  Clock clk(c.timing);
  const Kernel k(n);
  const Vec xi = to_vec(c.xi, c.n, "xi");
  const std::string params = ParamList{}.add("n", c.n).add("R", c.R).add("xi", c.xi.empty() ? std::vector<double>{0.0} : c.xi).s;
  const double tol = tol_of(c);
  const QuadResult q = int_absH_ball(k, c.R, xi);
  const double exact = absH_ball_exact(c.n, c.R, xi);
  Rows rows{{"lemma-37.value", params, q.value, exact, std::abs(q.value - exact) <= tol, clk.lap()}};
  if (headline) return rows;
  const double cap = c.R * c.R / (2.0 * (c.n - 2));
  if (xi.norm() > 0.0)
    rows.push_back({"lemma-37.strict", params, q.value, cap, cap - q.value > q.err_est, clk.lap()});
  if (c.samples > 0) {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < c.samples; ++s) {
      Vec d(c.n);
      for (int i = 0; i < c.n; ++i) d[i] = gauss(rng);
      const Vec p = d * (c.R * unif(rng) / d.norm());
      const QuadResult qs = int_absH_ball(k, c.R, p);
      worst = std::min(worst, cap - qs.value - qs.err_est);
    }
    rows.push_back({"lemma-37.random", ParamList{}.add("n", c.n).add("R", c.R).add("samples", c.samples).add("seed", double(c.seed)).s,
                    worst, 0.0, worst > 0.0, clk.lap()});
  }
  return rows;
}

Rows run_rep_identity(const ExperimentConfig& c, bool) {
  const Dim n(c.n);
  Clock clk(c.timing);
  const Vec o = Vec::zeros(c.n);
  const Vec xi = to_vec(c.xi, c.n, "xi");
  const std::string params = ParamList{}
                                 .add("n", c.n)
                                 .add("lambda1", c.lambda1)
                                 .add("lambda2", c.lambda2)
                                 .add("rho", c.rho)
                                 .add("R", c.R)
                                 .add("xi", c.xi.empty() ? std::vector<double>{0.0} : c.xi)
                                 .s;
  const Bubble b2(c.lambda2, o);
  const Field u = glue_concentric({Bubble(c.lambda1, o), b2, c.rho, c.R});
  QuadOptions opt;
  opt.radial_breaks = {c.rho, c.R};
  const RepIdentity r = rep_identity(u, b2, {o, c.R}, xi, opt);
  const double rel = std::abs(r.residual) / std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
  return {{"rep-identity", params, rel, tol_of(c), rel <= tol_of(c), clk.lap()}};
}

Rows run_rep_singular(const ExperimentConfig& c, bool headline) {
  Clock clk(c.timing);
  const double e = exponent_of(c);
  const int n = c.n;
  const Vec o = Vec::zeros(n);
  const Vec xi = c.xi.empty() ? Vec::unit(n, 0, 0.5) : to_vec(c.xi, n, "xi");
  const double mu = 3.0 - n - e, nu = n - 2.0 + e;
  const SingularProfile prof{o, mu, nu, std::abs(e * (e + n - 2)), std::abs(e), 0.5};
  const std::string params =
      ParamList{}.add("n", n).add("exponent", e).add("xi", c.xi.empty() ? std::vector<double>{0.5} : c.xi).add("eps", c.epsilons).s;
  const RepSingular rs = rep_formula_singular(power_field(o, e), prof, {o, 1.0}, xi, c.epsilons);
  const double tol = tol_of(c);
  Rows rows{{"rep-singular.extrapolated", params, std::abs(rs.extrapolated), tol, std::abs(rs.extrapolated) <= tol, clk.lap()}};
  if (headline) return rows;
  bool decreasing = true;
  for (std::size_t i = 1; i < rs.levels.size(); ++i)
    decreasing = decreasing && std::abs(rs.levels[i].residual) < std::abs(rs.levels[i - 1].residual);
  for (const auto& lv : rs.levels)
    rows.push_back({"rep-singular.residual", ParamList{}.add("n", n).add("exponent", e).add("eps", lv.epsilon).s,
                    lv.residual, 0.0, decreasing, 0.0});
  // excluded-sphere term over eps^nu: constant up to a factor 2
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& lv : rs.levels) {
    const double r = std::abs(lv.excluded) / std::pow(lv.epsilon, nu);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  rows.push_back({"rep-singular.excluded-scaling", params, hi / lo, 2.0, hi / lo <= 2.0, 0.0});
  rows.push_back({"rep-singular.order", params, rs.order, nu, rs.order > 0.0, 0.0});
  return rows;
}

Rows run_blowup(const ExperimentConfig& c, bool headline) {
  Clock clk(c.timing);
  const int n = c.n;
  const Bubble b(c.mu, to_vec(c.center, n, "center"));
  const std::string params = ParamList{}
                                 .add("n", n)
                                 .add("mu", c.mu)
                                 .add("center", c.center)
                                 .add("epsilon", c.epsilon)
                                 .add("window", c.window)
                                 .s;
  const double tol = tol_of(c);
  BlowupInput inp{bubble_field(b), c.epsilon, c.window, c.delta_target, 5.0, {}, {}};
  inp.grid.points_per_axis = c.grid;
  const auto rep = detect(inp);
  Rows rows;
  if (!rep) {
    rows.push_back({"blowup.mu", params, std::numeric_limits<double>::infinity(), tol, false, clk.lap()});
    return rows;
  }
  const Bubble found = rep->bubble();
  const double rel = std::abs(found.lambda() - c.mu) / c.mu;
  rows.push_back({"blowup.mu", params, rel, tol, rel <= tol, clk.lap()});
  if (headline) return rows;
  rows.push_back({"blowup.delta", params, rep->delta_measured, c.delta_target, rep->delta_measured <= c.delta_target, 0.0});
  const double cerr = distance(found.center(), b.center()) / c.mu;
  rows.push_back({"blowup.center", params, cerr, tol, cerr <= tol, 0.0});
  const double cons = rep->lambda_consistency * std::pow(rep->M_eps, 2.0 / (n - 2));
  rows.push_back({"blowup.window", params, rep->lambda_consistency, kOuterRadius / std::pow(rep->M_eps, 2.0 / (n - 2)),
                  cons < kOuterRadius, 0.0});
  if (c.mu2 > 0.0) {
    const Bubble b2(c.mu2, to_vec(c.center2, n, "center2"));
    BlowupInput two{sum_field(bubble_field(b), bubble_field(b2)), c.epsilon, c.window, c.delta_target2, 5.0, {}, {}};
    two.grid.points_per_axis = c.grid;
    const auto hits = detect_all(two, 3);
    // each planted center must be matched within its own scale
    double worst = 0.0;
    for (const Bubble& p : {b, b2}) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& h : hits) best = std::min(best, distance(h.bubble().center(), p.center()) / p.lambda());
      worst = std::max(worst, best);
    }
    rows.push_back({"blowup.two-centers",
                    ParamList{}.add("n", n).add("mu", c.mu).add("mu2", c.mu2).add("center2", c.center2).add("found", double(hits.size())).s,
                    worst, 1.0, hits.size() == 2 && worst <= 1.0, clk.lap()});
  }
  return rows;
}

}  // namespace

std::optional<Kind> parse_kind(const std::string& s) {
  for (const auto& [k, name] : kind_table())
    if (name == s) return k;
  return std::nullopt;
}

std::string kind_name(Kind k) {
  for (const auto& [kk, name] : kind_table())
    if (kk == k) return name;
  return "?";
}

std::vector<std::string> kind_names() {
  std::vector<std::string> out;
  for (const auto& kv : kind_table()) out.push_back(kv.second);
  return out;
}

ExperimentConfig resolve_defaults(ExperimentConfig cfg) {
  if (std::isnan(cfg.lambda1)) cfg.lambda1 = cfg.kind == Kind::thm_b ? 1.0 / 420.0 : 0.0099;
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  const ExperimentConfig c = resolve_defaults(cfg);
  if (c.n < 3 || c.n > 6) throw ConfigError("n must lie in 3..6");
  if (c.grid < 0 || c.grid == 1) throw ConfigError("grid must be 0 (default) or at least 2");
  const auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
  };
  switch (c.kind) {
    case Kind::thm_a:
    case Kind::rep_identity:
      positive(c.lambda1, "lambda1");
      positive(c.lambda2, "lambda2");
      if (!(c.rho > 0.0 && c.rho < c.R)) throw ConfigError("need 0 < rho < R");
      if (c.kind == Kind::rep_identity && to_vec(c.xi, c.n, "xi").norm() >= c.R) throw ConfigError("xi must lie inside B(0, R)");
      break;
    case Kind::thm_b:
      positive(c.lambda1, "lambda1");
      positive(c.lambda2, "lambda2");
      positive(c.r1_width, "r1_width");
      positive(c.a_width, "a_width");
      if (c.sigma < 1.0) throw ConfigError("sigma must be at least 1");
      if (!(c.r1 >= c.lambda1 && c.a >= c.lambda2)) throw ConfigError("need r1 >= lambda1 and a >= lambda2");
      if (c.dist <= c.r1 + c.r1_width + c.a + c.a_width) throw ConfigError("transition balls overlap; increase dist");
      break;
    case Kind::example_525:
      positive(c.lambda, "lambda");
      positive(c.sep, "sep");
      if (c.unequal) {
        positive(c.lambda1, "lambda1");
        positive(c.lambda2, "lambda2");
      }
      break;
    case Kind::glue_insert: {
      if (c.n < 5) throw ConfigError("glue-insert needs n >= 5: the alpha window is empty for n = 3, 4");
      const double al = alpha_of(c);
      if (!(al > 0.0 && 2.0 * (1.0 + al) < c.n)) throw ConfigError("alpha must lie in (0, (n-2)/2)");
      if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
      positive(c.stability, "stability");
      break;
    }
    case Kind::lemma_37:
      positive(c.R, "R");
      if (to_vec(c.xi, c.n, "xi").norm() >= c.R) throw ConfigError("xi must lie inside B(0, R)");
      if (c.samples < 0) throw ConfigError("samples must be nonnegative");
      break;
    case Kind::rep_singular: {
      const double e = exponent_of(c);
      if (!(e > 2.0 - c.n && e < 3.0 - c.n)) throw ConfigError("exponent must lie in (2-n, 3-n)");
      const Vec xi = c.xi.empty() ? Vec::unit(c.n, 0, 0.5) : to_vec(c.xi, c.n, "xi");
      if (!(xi.norm() > 0.0 && xi.norm() < 1.0)) throw ConfigError("xi must lie in B(0,1) away from the origin");
      if (c.epsilons.empty()) throw ConfigError("need at least one excluded radius");
      for (double eps : c.epsilons)
        if (!(eps > 0.0 && eps < 0.5 * xi.norm())) throw ConfigError("excluded radii must lie in (0, |xi|/2)");
      break;
    }
    case Kind::blowup: {
      positive(c.mu, "mu");
      positive(c.window, "window");
      positive(c.delta_target, "delta_target");
      if (!(c.epsilon > 0.0 && c.epsilon < kOuterRadius)) throw ConfigError("epsilon must lie in (0, 5/8)");
      const double r = to_vec(c.center, c.n, "center").norm();
      if (!(r > c.epsilon && r < kOuterRadius)) throw ConfigError("center must lie in the annulus eps < |x| < 5/8");
      if (c.mu2 > 0.0) {
        const double r2 = to_vec(c.center2, c.n, "center2").norm();
        if (!(r2 > c.epsilon && r2 < kOuterRadius)) throw ConfigError("center2 must lie in the annulus");
      }
      break;
    }
  }
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& raw, bool headline_only) {
  const ExperimentConfig cfg = resolve_defaults(raw);
  validate(cfg);
  switch (cfg.kind) {
    case Kind::thm_a: return run_thm_a(cfg, headline_only);
    case Kind::thm_b: return run_thm_b(cfg, headline_only);
    case Kind::example_525: return run_example_525(cfg, headline_only);
    case Kind::glue_insert: return run_glue_insert(cfg, headline_only);
    case Kind::lemma_37: return run_lemma_37(cfg, headline_only);
    case Kind::rep_identity: return run_rep_identity(cfg, headline_only);
    case Kind::rep_singular: return run_rep_singular(cfg, headline_only);
    case Kind::blowup: return run_blowup(cfg, headline_only);
  }
  return {};
}

void set_param(ExperimentConfig& cfg, const std::string& name, double value) {
  const auto& t = param_table();
  const auto it = t.find(name);
  if (it == t.end()) throw ConfigError("unknown sweep parameter '" + name + "'");
  it->second(cfg, value);
}

SweepAxis parse_sweep_axis(const std::string& name, const std::string& spec) {
  if (!param_table().contains(name)) throw ConfigError("unknown sweep parameter '" + name + "'");
  SweepAxis ax{name, {}};
  const auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw ConfigError("bad number '" + s + "' in sweep spec for " + name);
    return v;
  };
  const auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
  };
  if (spec.find(':') == std::string::npos) {
    for (const auto& v : split(spec, ',')) ax.values.push_back(num(v));
    return ax;
  }
  const auto parts = split(spec, ':');
  if (parts.size() < 3 || parts.size() > 4) throw ConfigError("range must be lo:hi:count[:log]");
  const double lo = num(parts[0]), hi = num(parts[1]), cnt = num(parts[2]);
  if (cnt < 0 || cnt != std::floor(cnt)) throw ConfigError("range count must be a nonnegative integer");
  const bool log = parts.size() == 4;
  if (log && parts[3] != "log") throw ConfigError("range suffix must be 'log'");
  if (log && !(lo > 0.0 && hi > 0.0)) throw ConfigError("log range needs positive ends");
  const int m = static_cast<int>(cnt);
  for (int i = 0; i < m; ++i) {
    const double t = m == 1 ? 0.0 : static_cast<double>(i) / (m - 1);
    ax.values.push_back(log ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
  }
  return ax;
}

std::vector<ReportRow> run_sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes) {
  std::vector<ReportRow> rows;
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.values.size();
  if (axes.empty()) total = 1;
  for (std::size_t k = 0; k < total; ++k) {
    ExperimentConfig cfg = base;
    std::size_t rem = k;
    for (std::size_t i = axes.size(); i-- > 0;) {
      const auto& v = axes[i].values;
      set_param(cfg, axes[i].name, v[rem % v.size()]);
      rem /= v.size();
    }
    const auto r = run_experiment(cfg, true);
    rows.push_back(r.front());
  }
  return rows;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_csv(const std::vector<ReportRow>& rows) {
  std::string s = "experiment,params,measured,bound,pass,seconds\n";
  for (const auto& r : rows)
    s += r.experiment + "," + r.params + "," + fmt(r.measured) + "," + fmt(r.bound) + "," + (r.pass ? "true" : "false") +
         "," + fmt(r.seconds) + "\n";
  return s;
}

std::string format_json(const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  const auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return std::stod(fmt(v));
    return fmt(v);  // inf / nan as strings
  };
  for (const auto& r : rows)
    arr.push_back({{"experiment", r.experiment},
                   {"params", r.params},
                   {"measured", num(r.measured)},
                   {"bound", num(r.bound)},
                   {"pass", r.pass},
                   {"seconds", num(r.seconds)}});
  return arr.dump(2) + "\n";
}

std::string format_summary(const std::vector<ReportRow>& rows) {
  std::string s;
  std::size_t passed = 0;
  for (const auto& r : rows) {
    char line[512];
    std::snprintf(line, sizeof line, "%-6s %-30s measured %-20s bound %-20s %s\n", r.pass ? "[PASS]" : "[FAIL]",
                  r.experiment.c_str(), fmt(r.measured).c_str(), fmt(r.bound).c_str(), r.params.c_str());
    s += line;
    passed += r.pass;
  }
  s += std::to_string(passed) + "/" + std::to_string(rows.size()) + " rows pass\n";
  return s;
}

}  // namespace bubbleforge
