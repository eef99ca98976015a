#include "bubbleforge/glue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bubbleforge {

Cutoff::Cutoff(double r_in, double r_out) : r_in_(r_in), r_out_(r_out) {
  if (!(r_in > 0.0 && r_in < r_out) || !std::isfinite(r_out)) throw BadRadii("cutoff needs 0 < r_in < r_out");
}

Cutoff make_cutoff(double r_in, double r_out) { return Cutoff(r_in, r_out); }

// s(t) = 6t^5 - 15t^4 + 10t^3, s' = 30 t^2 (t-1)^2, s'' = 60 t (2t-1)(t-1)

double Cutoff::value(double r) const {
  if (r <= r_in_) return 1.0;
  if (r >= r_out_) return 0.0;
  const double t = (r - r_in_) / width();
  return 1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double Cutoff::d1(double r) const {
  if (r <= r_in_ || r >= r_out_) return 0.0;
  const double w = width();
  const double t = (r - r_in_) / w;
  return -30.0 * t * t * (t - 1.0) * (t - 1.0) / w;
}

double Cutoff::d2(double r) const {
  if (r <= r_in_ || r >= r_out_) return 0.0;
  const double w = width();
  const double t = (r - r_in_) / w;
  return -60.0 * t * (2.0 * t - 1.0) * (t - 1.0) / (w * w);
}

Jet Cutoff::radial_jet(const Vec& x, const Vec& center) const {
  const Vec d = x - center;
  const double r = d.norm();
  Jet j;
  j.value = value(r);
  j.gradient = Vec::zeros(x.dim());
  if (r <= r_in_ || r >= r_out_) return j;
  const double p1 = d1(r);
  j.gradient = d * (p1 / r);
  j.laplacian = d2(r) + (x.dim() - 1) * p1 / r;
  return j;
}

namespace {

// phi f + (1 - phi) g by the product rule.
Jet blend(const Jet& phi, const Jet& f, const Jet& g) {
  const double diff = f.value - g.value;
  Jet out;
  out.value = g.value + phi.value * diff;
  out.gradient = g.gradient + (f.gradient - g.gradient) * phi.value + phi.gradient * diff;
  out.laplacian = g.laplacian + phi.value * (f.laplacian - g.laplacian) +
                  2.0 * phi.gradient.dot(f.gradient - g.gradient) + phi.laplacian * diff;
  return out;
}

class BlendField final : public FieldImpl {
 public:
  BlendField(Field inner, Field outer, Cutoff phi, const Vec& center, std::optional<double> decay,
             std::optional<Vec> radial)
      : inner_(std::move(inner)), outer_(std::move(outer)), phi_(phi), center_(center), decay_(decay),
        radial_(std::move(radial)) {}

  int dim() const override { return inner_.dim(); }

  double value(const Vec& x) const override {
    const double p = phi_.value(distance(x, center_));
    if (p == 1.0) return inner_.value(x);
    if (p == 0.0) return outer_.value(x);
    return p * inner_.value(x) + (1.0 - p) * outer_.value(x);
  }

  Jet jet(const Vec& x) const override {
    const Jet p = phi_.radial_jet(x, center_);
    if (p.value == 1.0) return inner_.jet(x);
    if (p.value == 0.0) return outer_.jet(x);
    return blend(p, inner_.jet(x), outer_.jet(x));
  }

  Domain domain() const override { return outer_.domain(); }
  std::optional<double> decay_coefficient() const override { return decay_; }
  std::optional<Vec> radial_center() const override { return radial_; }

 private:
  Field inner_, outer_;
  Cutoff phi_;
  Vec center_;
  std::optional<double> decay_;
  std::optional<Vec> radial_;
};

class DisjointField final : public FieldImpl {
 public:
  DisjointField(const DisjointConfig& c, Cutoff phi1, Cutoff phi2)
      : b1_(c.b1), b2_(c.b2), u1_(bubble_field(c.b1)), u2_(bubble_field(c.b2)), phi1_(phi1), phi2_(phi2) {}

  int dim() const override { return b1_.dim(); }

  double value(const Vec& x) const override {
    const double p1 = phi1_.value(distance(x, b1_.center()));
    const double p2 = phi2_.value(distance(x, b2_.center()));
    return (1.0 - p2) * u1_.value(x) + (1.0 - p1) * u2_.value(x);
  }

  // (1 - phi_2) u1 + (1 - phi_1) u2; at most one cutoff is active at x
  Jet jet(const Vec& x) const override {
    const Jet a = u1_.jet(x);
    const Jet b = u2_.jet(x);
    const Jet p1 = phi1_.radial_jet(x, b1_.center());
    const Jet p2 = phi2_.radial_jet(x, b2_.center());
    Jet out;
    out.value = (1.0 - p2.value) * a.value + (1.0 - p1.value) * b.value;
    out.gradient = a.gradient * (1.0 - p2.value) - p2.gradient * a.value + b.gradient * (1.0 - p1.value) -
                   p1.gradient * b.value;
    out.laplacian = (1.0 - p2.value) * a.laplacian - 2.0 * p2.gradient.dot(a.gradient) - p2.laplacian * a.value +
                    (1.0 - p1.value) * b.laplacian - 2.0 * p1.gradient.dot(b.gradient) - p1.laplacian * b.value;
    return out;
  }

  std::optional<double> decay_coefficient() const override {
    return *u1_.decay_coefficient() + *u2_.decay_coefficient();
  }

 private:
  Bubble b1_, b2_;
  Field u1_, u2_;
  Cutoff phi1_, phi2_;
};

class PerturbedHost final : public FieldImpl {
 public:
  PerturbedHost(const Bubble& b, double delta)
      : b_(b), u_(bubble_field(b)), amp_(delta * std::pow(b.lambda(), 0.5 * (2 - b.dim())) / 3.0) {}

  int dim() const override { return b_.dim(); }

  Jet jet(const Vec& x) const override {
    Jet j = u_.jet(x);
    const double lam = b_.lambda();
    const double t = (x[0] - b_.center()[0]) / lam;
    j.value += amp_ * (2.0 + std::sin(t));
    j.gradient[0] += amp_ * std::cos(t) / lam;
    j.laplacian -= amp_ * std::sin(t) / (lam * lam);
    return j;
  }

 private:
  Bubble b_;
  Field u_;
  double amp_;
};

}  // namespace

Field glue_concentric(const ConcentricConfig& cfg) {
  if (!(cfg.rho > 0.0 && cfg.rho < cfg.R) || !std::isfinite(cfg.R))
    throw BadConfig("concentric glue needs 0 < rho < R");
  if (!(cfg.b1.center() == cfg.b2.center())) throw BadConfig("concentric glue needs a common center");
  const Field u2 = bubble_field(cfg.b2);
  return Field::make<BlendField>(bubble_field(cfg.b1), u2, Cutoff(cfg.rho, cfg.R), cfg.b1.center(),
                                 u2.decay_coefficient(), cfg.b1.center());
}

Field glue_disjoint(const DisjointConfig& cfg) {
  if (cfg.b1.dim() != cfg.b2.dim()) throw BadConfig("disjoint glue: dimension mismatch");
  const double r1_out = cfg.r1_out.value_or(2.0 * cfg.r1);
  const double a_out = cfg.a_out.value_or(2.0 * cfg.a);
  if (!(cfg.r1 > 0.0 && cfg.r1 < r1_out && cfg.a > 0.0 && cfg.a < a_out))
    throw BadConfig("disjoint glue needs 0 < r1 < r1_out and 0 < a < a_out");
  if (!(distance(cfg.b1.center(), cfg.b2.center()) > r1_out + a_out))
    throw OverlapError("disjoint glue: transition balls intersect");
  return Field::make<DisjointField>(cfg, Cutoff(cfg.r1, r1_out), Cutoff(cfg.a, a_out));
}

Field glue_bubble_into(const InsertConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw BadConfig("glue-in needs lambda > 0");
  if (!(cfg.rho_m > 0.0 && cfg.rho_m < cfg.rho_M)) throw BadConfig("glue-in needs 0 < rho_m < rho_M");
  if (cfg.x1.dim() != cfg.host.dim()) throw BadConfig("glue-in: dimension mismatch");
  const int n = cfg.host.dim();
  const Vec origin = Vec::zeros(n);
  return Field::make<BlendField>(bubble_field(Bubble(cfg.lambda, origin)), translated_field(cfg.host, cfg.x1),
                                 Cutoff(cfg.lambda * cfg.rho_m, cfg.lambda * cfg.rho_M), origin, std::nullopt,
                                 std::nullopt);
}

Field glue(const GlueConfig& cfg) {
  return std::visit(
      [](const auto& c) -> Field {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConcentricConfig>) return glue_concentric(c);
        else if constexpr (std::is_same_v<T, DisjointConfig>) return glue_disjoint(c);
        else return glue_bubble_into(c);
      },
      cfg);
}

double rho_band_exponent(double alpha, Dim n) {
  const double m = n.n() - 2.0;
  return m * (m - 2.0 * alpha) / (2.0 * (n.n() + 2.0));
}

RhoMSolution solve_rho_M(double delta, double alpha, Dim n) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("solve_rho_M needs 0 < delta < 1");
  if (!(alpha > 0.0 && 2.0 * (1.0 + alpha) < n.n())) throw InvalidInput("solve_rho_M needs alpha > 0, 2(1+alpha) < n");
  RhoMSolution s;
  s.alpha = alpha;
  s.delta_bar = std::pow(delta, 2.0 / (n.n() - 2));
  const double first = std::pow(s.delta_bar, rho_band_exponent(alpha, n));
  s.band_lo = first + std::pow(s.delta_bar, n.half());
  s.band_hi = 2.0 * first;
  if (!(s.band_lo <= s.band_hi)) throw NoSolution("admissible band for rho_M is empty");
  const double target = std::sqrt(s.band_lo * s.band_hi);
  if (!(target < 1.0)) throw NoSolution("admissible band for rho_M needs values below 1");
  s.rho_M = std::sqrt(std::pow(target, -1.0 / n.half()) - 1.0);
  return s;
}

double rho_m_for(double rho_M) { return std::max(rho_M - 10.0, 0.5 * rho_M); }

Field perturbed_host(const Bubble& b, double delta) { return Field::make<PerturbedHost>(b, delta); }

KReport kg_deviation(const Field& f, const AnnulusRegion& region, const GridSpec& spec) {
  return sup_scan(f, region, spec);
}

InsertReport glue_insert_experiment(Dim n, double delta, double alpha, double lambda, const GridSpec& spec) {
  InsertReport rep;
  rep.rho = solve_rho_M(delta, alpha, n);
  rep.rho_m = rho_m_for(rep.rho.rho_M);
  const int d = n.n();
  const Vec origin = Vec::zeros(d);
  const Vec x1 = Vec::unit(d, 0, 0.25);
  const Field host = perturbed_host(Bubble(lambda, x1), delta);
  const Field w = glue_bubble_into({host, x1, lambda, rep.rho_m, rep.rho.rho_M});

  GridSpec ball_spec = spec;
  ball_spec.use_radial_symmetry = false;
  rep.epsilon = sup_scan(host, BallRegion{x1, lambda * rep.rho.rho_M}, ball_spec).sup_abs_dev;

  const AnnulusRegion annulus{origin, lambda * rep.rho_m, lambda * rep.rho.rho_M};
  rep.report = kg_deviation(w, annulus, spec);
  rep.sup_kg = rep.report.sup_abs_dev;
  rep.scale = std::max(rep.epsilon, std::pow(rep.rho.delta_bar, alpha));
  rep.constant = rep.sup_kg / rep.scale;

  const double p = n.critical_exponent();
  const double lam_pow = std::pow(lambda, 0.5 * (d + 2));
  const KReport low = scan_region_max(
      annulus, d, [&](const Vec& x) { return -std::pow(w.value(x), p) * lam_pow; }, spec);
  rep.floor_min = -low.sup_abs_dev;
  rep.floor_bound = std::pow(rep.rho.delta_bar, n.half() - alpha);
  return rep;
}

}  // namespace bubbleforge
