// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Optional arguments select criteria by number.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <string>

#include "bubbleforge/blowup.hpp"
#include "bubbleforge/bounds.hpp"
#include "bubbleforge/field_core.hpp"
#include "bubbleforge/glue.hpp"
#include "bubbleforge/kelvin.hpp"
#include "bubbleforge/potential.hpp"
#include "bubbleforge/scan.hpp"
#include "support.hpp"

using namespace bubbleforge;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome bubble_curvature() {
  Outcome o;
  auto g = bftest::rng(101);
  double worst = 0.0, worst_fd = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 3 + static_cast<int>(g() % 4);
    const Bubble b(std::exp(bftest::uniform(g, -3, 3)), bftest::random_point(g, n, 2.0));
    const Field f = bubble_field(b);
    const Vec x = b.center() + bftest::random_point(g, n, 3.0 * b.lambda());
    worst = std::max(worst, std::abs(k_function(f, x) - 1.0));
    worst_fd = std::max(worst_fd, std::abs(k_function_fd(f, x, 1e-3 * local_length_scale(f, x)) - 1.0));
  }
  o.require(worst <= 1e-8, "analytic |K-1| <= 1e-8");
  o.require(worst_fd <= 1e-4, "FD |K-1| <= 1e-4");
  o.note("max |K-1| " + num(worst) + ", FD " + num(worst_fd));
  return o;
}

Outcome newtonian_ball() {
  Outcome o;
  for (int n = 3; n <= 6; ++n) {
    const QuadResult r = int_absH_ball(Kernel(Dim(n)), 1.0, Vec::zeros(n));
    o.require(std::abs(r.value - 0.5 / (n - 2)) <= 1e-6, "centered value n=" + std::to_string(n));
    if (n <= 4) o.note("n=" + std::to_string(n) + ": " + num(r.value));
  }
  auto g = bftest::rng(102);
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + i % 4;
    const Vec xi = bftest::random_shell_point(g, n, 0.05, 0.95);
    const QuadResult r = int_absH_ball(Kernel(Dim(n)), 1.0, xi);
    const double margin = 0.5 / (n - 2) - r.value;
    o.require(margin > r.err_est, "strict inequality at random xi");
    min_margin = std::min(min_margin, margin / std::max(r.err_est, 1e-300));
  }
  o.note("min margin/err_est " + num(min_margin));
  return o;
}

Outcome power_identity() {
  Outcome o;
  auto g = bftest::rng(103);
  double worst = 0.0, worst_closed = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 3 + i % 4;
    const Vec z = Vec::zeros(n);
    Field f = base_field(Dim(n));
    Vec x = bftest::random_point(g, n, 2.0);
    switch (i % 5) {
      case 0: {
        const Bubble b(bftest::uniform(g, 0.2, 3.0), bftest::random_point(g, n, 1.0));
        f = bubble_field(b);
        const Identity34 id = identity_3_4(f, x);
        const double r2 = (x - b.center()).norm2(), l2 = b.lambda() * b.lambda();
        worst_closed = std::max(worst_closed, rel(id.rhs, 4.0 * n + 4.0 * (n + 2) * r2 / l2));
        break;
      }
      case 1: f = sum_field(bubble_field(Bubble(0.5, z)), bubble_field(Bubble(1.5, Vec::unit(n, 1, 1.0)))); break;
      case 2: break;
      case 3:
        f = glue_concentric({Bubble(0.3, z), Bubble(1.0, z), 1.0, 2.0});
        x = bftest::random_shell_point(g, n, 0.0, 3.0);
        break;
      case 4:
        f = glue_disjoint({Bubble(0.2, Vec::unit(n, 0, 3.0)), Bubble(0.5, z), 0.5, 0.6, {}, {}});
        x = bftest::random_point(g, n, 3.0);
        break;
    }
    const Identity34 id = identity_3_4(f, x);
    worst = std::max(worst, std::abs(id.residual) / id.scale);
  }
  o.require(worst <= 1e-4, "FD residual <= 1e-4");
  o.require(worst_closed <= 1e-8, "bubble closed form to 1e-8");
  o.note("max residual " + num(worst) + ", closed form " + num(worst_closed));
  return o;
}

Outcome representation_identity() {
  Outcome o;
  const Vec z = Vec::zeros(3);
  const Bubble b2(1.0, z);
  const Field u = glue_concentric({Bubble(0.0099, z), b2, 1.0, 10.0});
  QuadOptions opt;
  opt.radial_breaks = {1.0, 10.0};
  const RepIdentity r = rep_identity(u, b2, {z, 10.0}, z, opt);
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  o.require(std::abs(r.residual) <= 1e-3 * scale, "|LHS-RHS| <= 1e-3 max");
  o.note("LHS " + num(r.lhs) + ", RHS " + num(r.rhs) + ", rel " + num(std::abs(r.residual) / scale));
  return o;
}

Outcome concentric_lower_bound() {
  Outcome o;
  const Vec z = Vec::zeros(3);
  const double target = 5.0 / 3.0;
  const ThmAConditions c = thmA_conditions(0.0099, 1, 1, 10, Dim(3));
  o.require(c.cond1, "first hypothesis");
  const double lb = lower_bound_4_4(0.0099, 1, 1, 10, Dim(3));
  o.require(std::abs(lb - 1.707) < 5e-4 && lb >= target, "lower bound ~1.707 >= 5/3");
  for (double l1 : {0.0099, 300.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (l1 > 1.0) o.require(thmA_conditions(l1, 1, 1, 10, Dim(3)).any(), "hypotheses at l1=300");
    const Field u = glue_concentric({Bubble(l1, z), Bubble(1.0, z), 1.0, 10.0});
    const KReport rep = sup_scan(u, BallRegion{z, 10.0});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(rep.sup_abs_dev >= target, "scan >= 5/3 at l1=" + num(l1));
    o.require(secs < 10.0, "scan under 10 s");
    o.note("l1=" + num(l1) + " sup " + num(rep.sup_abs_dev));
  }
  o.note("bound " + num(lb));
  return o;
}

// Draws tuples until `want` of them satisfy the chosen hypothesis.
Outcome hypothesis_chain() {
  Outcome o;
  auto g = bftest::rng(106);
  int have[2] = {0, 0}, bad = 0;
  while (have[0] < 100 || have[1] < 100) {
    const int n = 3 + static_cast<int>(g() % 4);
    const double rho = std::exp(bftest::uniform(g, -2, 2));
    const double R = rho * std::exp(bftest::uniform(g, 0.05, 3));
    const double l2 = std::exp(bftest::uniform(g, -3, 3));
    const int which = have[0] < 100 ? 0 : 1;
    double l1;
    if (which == 0)
      l1 = l2 * (rho * rho / (R * R)) / (1 + l2 * l2 / (R * R)) * std::exp(bftest::uniform(g, -4, 0));
    else
      l1 = l2 * std::sqrt(3.0 * (n + 2) / (2.0 * (n - 2)) * (1 + std::pow(R / l2, 4))) * std::exp(bftest::uniform(g, 0, 3));
    const ThmAConditions c = thmA_conditions(l1, l2, rho, R, Dim(n));
    if (!(which == 0 ? c.cond1 : c.cond2)) continue;
    ++have[which];
    if (lower_bound_4_4(l1, l2, rho, R, Dim(n)) < (n + 2.0) / n) ++bad;
  }
  o.require(bad == 0, "no violations");
  o.note("200 tuples, " + std::to_string(bad) + " violations");
  return o;
}

Outcome depth_equivalence() {
  Outcome o;
  auto g = bftest::rng(107);
  int disagree = 0, yes = 0;
  for (int i = 0; i < 100; ++i) {
    const Dim n(3 + static_cast<int>(g() % 4));
    const double rho = std::exp(bftest::uniform(g, -2, 2));
    const double R = rho * std::exp(bftest::uniform(g, 0.05, 3));
    const double l2 = std::exp(bftest::uniform(g, -3, 3));
    const double l1 = l2 * (rho * rho / (R * R)) / (1 + l2 * l2 / (R * R)) * std::exp(bftest::uniform(g, -2, 2));
    const bool a = thmA_conditions(l1, l2, rho, R, n).cond1;
    const bool b = depth_condition(depth_factors(l1, l2, rho, R, n), l1, l2);
    const bool c = value_condition(l1, l2, rho, R, n);
    disagree += !(a == b && b == c);
    yes += a;
  }
  o.require(disagree == 0, "boolean agreement");
  o.note(std::to_string(disagree) + " disagreements, " + std::to_string(yes) + "/100 true");
  return o;
}

Outcome equal_bubbles() {
  Outcome o;
  const int n = 3;
  const Vec c1{2, 0, 0}, c2{-2, 0, 0};
  const Field u = sum_field(bubble_field(Bubble(1, c1)), bubble_field(Bubble(1, c2)));
  const double mid = k_function(u, Vec{0, 0.7, -0.3});
  o.require(std::abs(mid - 0.0625) <= 1e-6, "midplane K = 1/16");
  GridSpec g;
  g.use_radial_symmetry = false;
  const KReport rep = sup_scan(u, BoxRegion{Vec{-5, -5, -5}, Vec{5, 5, 5}}, g);
  o.require(rep.sup_abs_dev <= 0.9375 + 1e-6, "sup |K-1| <= 0.9375");
  const double far = k_function(u, Vec::unit(n, 2, 1e6));
  o.require(std::abs(far - k_sum_limit(1, 1, Dim(n))) <= 1e-4, "limit, equal scales");
  const Field v = sum_field(bubble_field(Bubble(0.5, c1)), bubble_field(Bubble(2, c2)));
  const double far2 = k_function(v, Vec::unit(n, 2, 1e6));
  o.require(std::abs(far2 - k_sum_limit(0.5, 2, Dim(n))) <= 1e-4, "limit, unequal scales");
  o.note("midplane " + num(mid) + ", sup " + num(rep.sup_abs_dev) + ", limits " + num(far) + " " + num(far2));
  return o;
}

Outcome separated_bubbles() {
  Outcome o;
  const int n = 3;
  const double l1 = 1.0 / 420;
  const Vec xi2 = Vec::zeros(n), xi1{2, 0, 0};
  // the stated witness touches (r1 + a = |xi1 - xi2|); its hypothesis is checked as is
  o.require(thmB_condition({l1, 1.0, 1.0, 1.0, xi1, xi2, 1.0}, Dim(n)), "hypothesis at r1 = 1");
  // the glue needs room for its transitions, so r1 shrinks to 0.995 with 0.002-wide annuli
  const ThmBParams p{l1, 1.0, 0.995, 1.0, xi1, xi2, 1.0};
  validate(p, Dim(n));
  o.require(thmB_condition(p, Dim(n)), "hypothesis at r1 = 0.995");
  const Field u = glue_disjoint({Bubble(l1, xi1), Bubble(1.0, xi2), 0.995, 1.0, 0.997, 1.002});
  GridSpec g;
  g.refine.levels = 3;
  g.use_radial_symmetry = false;
  const KReport rep = sup_scan(u, BoxRegion{Vec{-1.502, -1.502, -1.502}, Vec{3.497, 1.502, 1.502}}, g);
  const double target = thmB_bound(1.0, Dim(n));
  o.require(rep.sup_abs_dev >= target, "scan >= 5/6");
  o.note("sup " + num(rep.sup_abs_dev) + " >= " + num(target) + " (r1 = 0.995)");
  return o;
}

Outcome kelvin_suite() {
  Outcome o;
  auto g = bftest::rng(110);
  double inv_err = 0.0, law_err = 0.0, k_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + i % 4;
    const Inversion inv(bftest::random_point(g, n, 1.0), bftest::uniform(g, 0.3, 2.0));
    const Vec x = inv.center() + bftest::random_shell_point(g, n, 0.1, 3.0);
    inv_err = std::max(inv_err, (invert_point(inv, invert_point(inv, x)) - x).norm() / std::max(1.0, x.norm()));
    const Bubble b(std::exp(bftest::uniform(g, -2, 1)), bftest::random_point(g, n, 2.0));
    law_err = std::max(law_err, rel(kelvin_field(bubble_field(b), inv).value(x), bubble_value(kelvin_bubble(b, inv), x)));
    const Field f = sum_field(bubble_field(b), bubble_field(Bubble(1.0, Vec::unit(n, 1, 1.5))));
    k_err = std::max(k_err, std::abs(k_function(kelvin_field(f, inv), x) - k_function(f, invert_point(inv, x))));
  }
  o.require(inv_err <= 1e-10, "involution 1e-10");
  o.require(law_err <= 1e-12, "bubble law 1e-12");
  o.require(k_err <= 1e-8, "K composition 1e-8");
  o.note("errors " + num(inv_err) + ", " + num(law_err) + ", " + num(k_err));
  return o;
}

Outcome glue_in() {
  Outcome o;
  const Dim n(5);
  const double alpha = 0.25;  // (n-4)/4
  const InsertReport a = glue_insert_experiment(n, 1e-3, alpha, 1.0);
  const InsertReport b = glue_insert_experiment(n, 1e-4, alpha, 1.0);
  const double ratio = std::max(a.constant, b.constant) / std::min(a.constant, b.constant);
  o.require(std::isfinite(ratio) && ratio <= 2.0, "C stable within x2");
  o.note("n=5 alpha=0.25 C " + num(a.constant) + " / " + num(b.constant) + ", ratio " + num(ratio));
  return o;
}

Outcome singular_representation() {
  Outcome o;
  const int n = 3;
  const double e = -0.5;
  const Vec z = Vec::zeros(n);
  const SingularProfile prof{z, 3.0 - n - e, n - 2.0 + e, std::abs(e * (e + n - 2)), std::abs(e), 0.5};
  const RepSingular rs = rep_formula_singular(power_field(z, e), prof, {z, 1.0}, Vec{0.5, 0, 0}, {1e-2, 1e-3, 1e-4});
  bool decreasing = true;
  for (std::size_t i = 1; i < rs.levels.size(); ++i)
    decreasing = decreasing && std::abs(rs.levels[i].residual) < std::abs(rs.levels[i - 1].residual);
  o.require(decreasing, "residual decreases");
  o.require(std::abs(rs.extrapolated) < 1e-4, "extrapolated below 1e-4");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& lv : rs.levels) {
    const double r = std::abs(lv.excluded) / std::pow(lv.epsilon, prof.nu);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  o.require(hi / lo <= 2.0, "excluded term ~ eps^nu within x2");
  o.note("residuals " + num(rs.levels[0].residual) + " " + num(rs.levels[1].residual) + " " + num(rs.levels[2].residual) +
         ", limit " + num(rs.extrapolated) + ", order " + num(rs.order));
  return o;
}

Outcome base_field_checks() {
  Outcome o;
  double worst_far = 0.0, worst_gap = 0.0;
  for (int n = 3; n <= 6; ++n) {
    const Dim d(n);
    o.require(k_function(base_field(d), Vec::zeros(n)) == 0.5, "K_b(0) = 0.5 exactly");
    worst_far = std::max(worst_far, std::abs(k_function(base_field(d), Vec::unit(n, 0, 1e6)) - (n - 2.0) / (4.0 * n)));
  }
  o.require(worst_far <= 1e-5, "far value (n-2)/(4n)");
  const int n = 3;
  const KBounds kb = combined_k_bounds(0.0, Dim(n));
  for (const Bubble& b : {Bubble(1.0, Vec::zeros(n)), Bubble(0.1, Vec{1, 0.5, 0}), Bubble(5.0, Vec{-2, 0, 1})}) {
    const Field f = sum_field(bubble_field(b), base_field(Dim(n)));
    const Objective out = [&](const Vec& x) {
      const double k = k_function(f, x);
      return std::max(kb.lo - k, k - kb.hi);
    };
    GridSpec g;
    g.points_per_axis = 41;
    const KReport rep = scan_region_max(BoxRegion{Vec{-5, -5, -5}, Vec{5, 5, 5}}, n, out, g);
    worst_gap = std::max(worst_gap, rep.sup_abs_dev);
  }
  o.require(worst_gap <= 1e-6, "combined K inside its bounds");
  o.note("far err " + num(worst_far) + ", worst excursion " + num(worst_gap));
  return o;
}

Outcome blowup_recovery() {
  Outcome o;
  const Vec c1{0.3, 0.05, -0.02}, c2{-0.1, 0.35, 0.1};
  const double mu = 1e-3;
  BlowupInput inp{bubble_field(Bubble(mu, c1)), 0.1, 2.0, 1e-6, 5.0, {}, {}};
  const auto r = detect(inp);
  o.require(r.has_value(), "single bubble detected");
  if (r) {
    const double err = std::abs(r->bubble().lambda() - mu) / mu;
    o.require(err <= 1e-6, "mu within 1e-6");
    o.require(r->delta_measured <= 1e-6, "delta <= 1e-6");
    o.note("mu err " + num(err) + ", delta " + num(r->delta_measured));
  }
  BlowupInput two{sum_field(bubble_field(Bubble(mu, c1)), bubble_field(Bubble(2e-3, c2))), 0.1, 2.0, 0.5, 5.0, {}, {}};
  const auto hits = detect_all(two, 3);
  double worst = 0.0;
  for (const auto& [c, l] : {std::pair{c1, mu}, std::pair{c2, 2e-3}}) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& h : hits) best = std::min(best, distance(h.bubble().center(), c) / l);
    worst = std::max(worst, best);
  }
  o.require(hits.size() == 2 && worst <= 1.0, "both centers found");
  o.note(std::to_string(hits.size()) + " bubbles, worst center err/scale " + num(worst));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // <= 0: no runtime limit
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "bubble-curvature", 1.0, bubble_curvature},
      {2, "newtonian-ball", 30.0, newtonian_ball},
      {3, "power-identity", 0.0, power_identity},
      {4, "representation-identity", 60.0, representation_identity},
      {5, "concentric-lower-bound", 20.0, concentric_lower_bound},
      {6, "hypothesis-chain", 0.0, hypothesis_chain},
      {7, "depth-equivalence", 0.0, depth_equivalence},
      {8, "equal-bubbles", 0.0, equal_bubbles},
      {9, "separated-bubbles", 120.0, separated_bubbles},
      {10, "kelvin-suite", 0.0, kelvin_suite},
      {11, "glue-in", 0.0, glue_in},
      {12, "singular-representation", 0.0, singular_representation},
      {13, "base-field", 0.0, base_field_checks},
      {14, "blowup-recovery", 30.0, blowup_recovery},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && !only.contains(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && secs >= c.limit_s) o.require(false, "runtime limit " + num(c.limit_s) + " s");
    failed += !o.pass;
    std::printf("[%s] %2d %-24s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", failed ? (std::to_string(failed) + " criteria failed").c_str() : "all criteria passed");
  return failed ? 1 : 0;
}
