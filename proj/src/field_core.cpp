#include "bubbleforge/field_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bubbleforge {

std::string Vec::str() const {
  std::ostringstream os;
  os.precision(12);
  for (int i = 0; i < dim_; ++i) os << (i ? ";" : "") << c_[i];
  return os.str();
}

Bubble::Bubble(double lambda, const Vec& center) : lambda_(lambda), center_(center) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("bubble scale must be positive and finite");
  if (!center.finite()) throw InvalidInput("bubble center must be finite");
  Dim check(center.dim());
  (void)check;
}

double bubble_value(const Bubble& b, const Vec& x) {
  const double r2 = (x - b.center()).norm2();
  const double lam = b.lambda();
  return std::pow(lam / (lam * lam + r2), 0.5 * (b.dim() - 2));
}

BubbleDerivatives bubble_derivatives(const Bubble& b, const Vec& x) {
  const int n = b.dim();
  const Vec d = x - b.center();
  const double lam = b.lambda();
  const double denom = lam * lam + d.norm2();
  const double u = std::pow(lam / denom, 0.5 * (n - 2));
  BubbleDerivatives out;
  out.gradient = d * (-(n - 2) * u / denom);
  out.laplacian = -static_cast<double>(n) * (n - 2) * std::pow(u, (n + 2.0) / (n - 2.0));
  return out;
}

namespace {

class BubbleField final : public FieldImpl {
 public:
  explicit BubbleField(const Bubble& b) : b_(b) {}
  int dim() const override { return b_.dim(); }
  double value(const Vec& x) const override { return bubble_value(b_, x); }
  Jet jet(const Vec& x) const override {
    const auto d = bubble_derivatives(b_, x);
    return {bubble_value(b_, x), d.gradient, d.laplacian};
  }
  std::optional<double> decay_coefficient() const override {
    return std::pow(b_.lambda(), 0.5 * (b_.dim() - 2));
  }
  std::optional<Vec> radial_center() const override { return b_.center(); }

 private:
  Bubble b_;
};

class SumField final : public FieldImpl {
 public:
  SumField(Field f, Field g) : f_(std::move(f)), g_(std::move(g)) {
    if (f_.dim() != g_.dim()) throw InvalidInput("sum_field: dimension mismatch");
  }
  int dim() const override { return f_.dim(); }
  double value(const Vec& x) const override { return f_.value(x) + g_.value(x); }
  Jet jet(const Vec& x) const override {
    Jet a = f_.jet(x);
    const Jet b = g_.jet(x);
    a.value += b.value;
    a.gradient += b.gradient;
    a.laplacian += b.laplacian;
    return a;
  }
  Domain domain() const override {
    // whole-space pieces defer to the other operand
    const Domain a = f_.domain();
    return a.kind == Domain::Kind::whole ? g_.domain() : a;
  }
  std::optional<double> decay_coefficient() const override {
    const auto a = f_.decay_coefficient();
    const auto b = g_.decay_coefficient();
    if (a && b) return *a + *b;
    return std::nullopt;
  }
  std::optional<Vec> radial_center() const override {
    const auto a = f_.radial_center();
    const auto b = g_.radial_center();
    if (a && b && *a == *b) return a;
    return std::nullopt;
  }

 private:
  Field f_, g_;
};

class BaseField final : public FieldImpl {
 public:
  explicit BaseField(Dim n) : n_(n.n()) {}
  int dim() const override { return n_; }
  Jet jet(const Vec& x) const override {
    const double r2 = x.norm2();
    const double s = r2 + 1.0;
    const double q = (2.0 - n_) / 4.0;
    const double v = std::pow(s, q);
    Jet j;
    j.value = v;
    j.gradient = x * (2.0 * q * v / s);
    j.laplacian = 2.0 * q * n_ * v / s + 4.0 * q * (q - 1.0) * v * r2 / (s * s);
    return j;
  }
  std::optional<Vec> radial_center() const override { return Vec::zeros(n_); }

 private:
  int n_;
};

class PowerField final : public FieldImpl {
 public:
  PowerField(const Vec& c, double s) : c_(c), s_(s) { Dim check(c.dim()); }
  int dim() const override { return c_.dim(); }
  Jet jet(const Vec& x) const override {
    const Vec d = x - c_;
    const double r2 = d.norm2();
    if (r2 == 0.0) throw AtCenter("power_field evaluated at its singular point");
    const double r = std::sqrt(r2);
    const double v = std::pow(r, s_);
    const int n = c_.dim();
    return {v, d * (s_ * v / r2), s_ * (s_ + n - 2) * v / r2};
  }
  Domain domain() const override { return Domain::punctured_at(c_); }
  std::optional<Vec> radial_center() const override { return c_; }

 private:
  Vec c_;
  double s_;
};

class TranslatedField final : public FieldImpl {
 public:
  TranslatedField(Field f, const Vec& shift) : f_(std::move(f)), shift_(shift) {}
  int dim() const override { return f_.dim(); }
  double value(const Vec& x) const override { return f_.value(shift_ + x); }
  Jet jet(const Vec& x) const override { return f_.jet(shift_ + x); }
  Domain domain() const override {
    Domain d = f_.domain();
    if (d.kind != Domain::Kind::whole) d.center -= shift_;
    return d;
  }
  std::optional<double> decay_coefficient() const override { return f_.decay_coefficient(); }
  std::optional<Vec> radial_center() const override {
    auto c = f_.radial_center();
    if (c) *c -= shift_;
    return c;
  }

 private:
  Field f_;
  Vec shift_;
};

}  // namespace

Field bubble_field(const Bubble& b) { return Field::make<BubbleField>(b); }
Field sum_field(const Field& f, const Field& g) { return Field::make<SumField>(f, g); }
Field base_field(Dim n) { return Field::make<BaseField>(n); }
Field power_field(const Vec& center, double exponent) { return Field::make<PowerField>(center, exponent); }
Field translated_field(const Field& f, const Vec& shift) { return Field::make<TranslatedField>(f, shift); }

double k_from_jet(const Jet& j, int n) {
  if (!(j.value > 0.0)) throw NonpositiveValue("K-function needs a positive value");
  return -j.laplacian / (static_cast<double>(n) * (n - 2) * std::pow(j.value, (n + 2.0) / (n - 2.0)));
}

double k_function(const Field& f, const Vec& x) { return k_from_jet(f.jet(x), f.dim()); }

double k_function_fd(const Field& f, const Vec& x, double h) {
  const int n = f.dim();
  const double u = f.value(x);
  if (!(u > 0.0)) throw NonpositiveValue("K-function needs a positive value");
  const double lap = fd_laplacian([&](const Vec& y) { return f.value(y); }, x, h);
  return -lap / (static_cast<double>(n) * (n - 2) * std::pow(u, (n + 2.0) / (n - 2.0)));
}

Vec fd_gradient(const ScalarFn& g, const Vec& x, double h) {
  Vec out(x.dim());
  for (int i = 0; i < x.dim(); ++i) {
    const Vec e = Vec::unit(x.dim(), i, h);
    out[i] = (g(x + e) - g(x - e)) / (2.0 * h);
  }
  return out;
}

double fd_laplacian(const ScalarFn& g, const Vec& x, double h) {
  const double g0 = g(x);
  double acc = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    const Vec e = Vec::unit(x.dim(), i, h);
    acc += g(x + e) - 2.0 * g0 + g(x - e);
  }
  return acc / (h * h);
}

double local_length_scale(const Field& f, const Vec& x) {
  const Jet j = f.jet(x);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double gn = j.gradient.norm();
  const double a = gn > 0.0 ? std::abs(j.value) / gn : inf;
  const double b = j.laplacian != 0.0 ? std::sqrt(std::abs(j.value / j.laplacian)) : inf;
  const double l = std::min(a, b);
  return std::isfinite(l) && l > 0.0 ? l : 1.0;
}

double k_sum_limit(double lambda1, double lambda2, Dim n) {
  if (!(lambda1 > 0.0 && lambda2 > 0.0)) throw InvalidInput("k_sum_limit: scales must be positive");
  const double a = 0.5 * (n.n() + 2);
  const double b = n.half();
  return (std::pow(lambda1, a) + std::pow(lambda2, a)) /
         std::pow(std::pow(lambda1, b) + std::pow(lambda2, b), n.critical_exponent());
}

double grad_inv_power_sq(const Field& f, const Vec& x) {
  const int n = f.dim();
  const Jet j = f.jet(x);
  if (!(j.value > 0.0)) throw NonpositiveValue("negative power of a nonpositive value");
  const double q = -2.0 / (n - 2);
  const double factor = q * std::pow(j.value, q - 1.0);
  return factor * factor * j.gradient.norm2();
}

double grad_inv_power(const Bubble& b, const Vec& x) {
  return 4.0 * (x - b.center()).norm2() / (b.lambda() * b.lambda());
}

Identity34 identity_3_4(const Field& f, const Vec& x, double h) {
  const int n = f.dim();
  if (h <= 0.0) h = 1e-4 * local_length_scale(f, x);
  const double q4 = -4.0 / (n - 2);
  const auto g = [&](const Vec& y) {
    const double u = f.value(y);
    if (!(u > 0.0)) throw NonpositiveValue("negative power of a nonpositive value");
    return std::pow(u, q4);
  };
  Identity34 out;
  out.lhs = fd_laplacian(g, x, h);
  const double k = k_function(f, x);
  out.rhs = 4.0 * n * k + (n + 2.0) * grad_inv_power_sq(f, x);
  out.residual = out.lhs - out.rhs;
  out.scale = std::max({1.0, std::abs(out.lhs), std::abs(out.rhs), std::abs(4.0 * n * k)});
  return out;
}

double identity_3_4_residual(const Field& f, const Vec& x, double h) { return identity_3_4(f, x, h).residual; }

double base_k(const Vec& x, Dim n) {
  const double r2 = x.norm2();
  return 0.5 * (1.0 - (n.n() + 2.0) / (2.0 * n.n()) * r2 / (r2 + 1.0));
}

KBounds combined_k_bounds(double kappa, Dim n) {
  const double k2 = kappa * kappa;
  if (!(k2 < 1.0)) throw KappaTooLarge("combined_k_bounds needs kappa^2 < 1");
  const double floor_b = (n.n() - 2.0) / (4.0 * n.n());
  const double spread = std::pow(2.0, 4.0 / (n.n() - 2));
  return {std::min(1.0 - k2, std::min(floor_b, 1.0 - k2) / spread), std::max(1.0 + k2, 0.5)};
}

}  // namespace bubbleforge
