#include "bubbleforge/kelvin.hpp"

#include <cmath>

namespace bubbleforge {

Inversion::Inversion(const Vec& center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("inversion radius must be positive");
  if (!center.finite()) throw InvalidInput("inversion center must be finite");
}

Vec invert_point(const Inversion& inv, const Vec& x) {
  const Vec z = x - inv.center();
  const double r2 = z.norm2();
  if (r2 == 0.0) throw AtCenter("inversion of its own center");
  const double a = inv.radius();
  return inv.center() + z * (a * a / r2);
}

namespace {

// Jet at a removable center: the mean of the exact jets at the 2n points
// center +- h e_i, which is the jet of the extension to O(h^2).
template <class JetFn>
Jet averaged_jet(const JetFn& jet_at, const Vec& center, double h, double value) {
  const int n = center.dim();
  Jet out;
  out.value = value;
  out.gradient = Vec::zeros(n);
  for (int i = 0; i < n; ++i) {
    for (double s : {-1.0, 1.0}) {
      const Jet j = jet_at(center + Vec::unit(n, i, s * h));
      out.gradient += j.gradient;
      out.laplacian += j.laplacian;
    }
  }
  out.gradient /= 2.0 * n;
  out.laplacian /= 2.0 * n;
  return out;
}

class KelvinField final : public FieldImpl {
 public:
  KelvinField(Field f, const Inversion& inv) : f_(std::move(f)), inv_(inv) {
    if (f_.dim() != inv_.dim()) throw InvalidInput("kelvin_field: dimension mismatch");
  }

  int dim() const override { return f_.dim(); }

  double value(const Vec& x) const override {
    const Vec z = x - inv_.center();
    const double r2 = z.norm2();
    const double a2 = inv_.radius() * inv_.radius();
    if (r2 == 0.0) return center_value();
    const double s = a2 / r2;
    return std::pow(s, 0.5 * (dim() - 2)) * f_.value(inv_.center() + z * s);
  }

  Jet jet(const Vec& x) const override {
    const Vec z = x - inv_.center();
    const double r2 = z.norm2();
    if (r2 == 0.0) {
      const double v = center_value();
      return averaged_jet([this](const Vec& y) { return jet(y); }, inv_.center(), 1e-5 * inv_.radius(), v);
    }
    const int n = dim();
    const double a2 = inv_.radius() * inv_.radius();
    const double s = a2 / r2;
    const Jet fj = f_.jet(inv_.center() + z * s);
    const double w = std::pow(s, 0.5 * (n - 2));
    // J = s (I - 2 z z^T / r2) is symmetric, so J^T grad f = J grad f.
    const Vec jg = (fj.gradient - z * (2.0 * z.dot(fj.gradient) / r2)) * s;
    Jet out;
    out.value = w * fj.value;
    out.gradient = z * (-(n - 2) * w * fj.value / r2) + jg * w;
    out.laplacian = w * s * s * fj.laplacian;
    return out;
  }

  Domain domain() const override {
    return f_.decay_coefficient() ? Domain::whole_space() : Domain::punctured_at(inv_.center());
  }

  std::optional<double> decay_coefficient() const override {
    if (!f_.domain().contains(inv_.center())) return std::nullopt;
    return std::pow(inv_.radius(), dim() - 2) * f_.value(inv_.center());
  }

  std::optional<Vec> radial_center() const override {
    const auto c = f_.radial_center();
    if (c && *c == inv_.center()) return c;
    return std::nullopt;
  }

 private:
  double center_value() const {
    const auto coef = f_.decay_coefficient();
    if (!coef) throw AtCenter("Kelvin image evaluated at the inversion center without removable extension");
    return *coef * std::pow(inv_.radius(), 2 - dim());
  }

  Field f_;
  Inversion inv_;
};

class ComposedKelvin final : public FieldImpl {
 public:
  ComposedKelvin(Field unit_image, const Inversion& inv2)
      : unit_image_(unit_image),
        inv_(inv2),
        nested_(kelvin_field(kelvin_field(unit_image, Inversion::unit(unit_image.dim())), inv2)) {}

  int dim() const override { return unit_image_.dim(); }

  double value(const Vec& x) const override {
    const int n = dim();
    const Vec z = x - inv_.center();
    const double r2 = z.norm2();
    const double a = inv_.radius();
    if (r2 == 0.0) return std::pow(a, 2 - n) * unit_image_.value(Vec::zeros(n));
    const Vec y = inv_.center() + z * (a * a / r2);
    const double y2 = y.norm2();
    if (y2 == 0.0) return nested_.value(x);
    return std::pow(a * a / r2, 0.5 * (n - 2)) * std::pow(y2, 0.5 * (2 - n)) * unit_image_.value(y / y2);
  }

  Jet jet(const Vec& x) const override {
    if (x == inv_.center()) {
      return averaged_jet([this](const Vec& y) { return nested_.jet(y); }, inv_.center(), 1e-5 * inv_.radius(),
                          value(x));
    }
    Jet j = nested_.jet(x);
    j.value = value(x);
    return j;
  }

  Domain domain() const override { return nested_.domain(); }

 private:
  Field unit_image_;
  Inversion inv_;
  Field nested_;
};

}  // namespace

Field kelvin_field(const Field& f, const Inversion& inv) { return Field::make<KelvinField>(f, inv); }

Bubble kelvin_bubble(const Bubble& b, const Inversion& inv) {
  const Vec xi = b.center() - inv.center();
  const double lam = b.lambda();
  const double a2 = inv.radius() * inv.radius();
  const double denom = lam * lam + xi.norm2();
  return Bubble(a2 * lam / denom, inv.center() + xi * (a2 / denom));
}

Field lemma_5_4_compose(const Field& unit_image, const Inversion& inv2) {
  return Field::make<ComposedKelvin>(unit_image, inv2);
}

}  // namespace bubbleforge
