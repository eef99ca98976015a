#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "bubbleforge/errors.hpp"
#include "bubbleforge/vec.hpp"

namespace bubbleforge {

/// Space dimension n >= 3 and the exponents derived from it.
class Dim {
 public:
  explicit Dim(int n) : n_(n) {
    if (n < 3 || n > kMaxDim) throw InvalidInput("dimension must satisfy 3 <= n <= " + std::to_string(kMaxDim));
  }
  int n() const { return n_; }
  /// (n+2)/(n-2)
  double critical_exponent() const { return (n_ + 2.0) / (n_ - 2.0); }
  /// (n-2)/2
  double half() const { return (n_ - 2.0) / 2.0; }
  /// n(n-2)
  double scale() const { return static_cast<double>(n_) * (n_ - 2); }

 private:
  int n_;
};

/// Value, gradient and Laplacian of a field at one point.
struct Jet {
  double value = 0.0;
  Vec gradient;
  double laplacian = 0.0;
};

/// Where a field is regular.
struct Domain {
  enum class Kind { whole, punctured, ball };
  Kind kind = Kind::whole;
  Vec center;
  double radius = 0.0;

  static Domain whole_space() { return {}; }
  static Domain punctured_at(const Vec& c) { return {Kind::punctured, c, 0.0}; }
  static Domain ball(const Vec& c, double r) { return {Kind::ball, c, r}; }

  bool contains(const Vec& x) const {
    switch (kind) {
      case Kind::whole: return true;
      case Kind::punctured: return distance(x, center) > 0.0;
      case Kind::ball: return distance(x, center) < radius;
    }
    return false;
  }
};

class FieldImpl {
 public:
  virtual ~FieldImpl() = default;
  virtual int dim() const = 0;
  virtual Jet jet(const Vec& x) const = 0;
  virtual double value(const Vec& x) const { return jet(x).value; }
  virtual Domain domain() const { return Domain::whole_space(); }
  /// L with f(y) |y|^(n-2) -> L as |y| -> infinity, when the field decays like a
  /// Newtonian potential. Kelvin images of such fields extend across the center.
  virtual std::optional<double> decay_coefficient() const { return std::nullopt; }
  /// Set when the field depends on |x - c| only.
  virtual std::optional<Vec> radial_center() const { return std::nullopt; }
};

/// Shared, immutable, positive C^2 field. Cheap to copy; safe to evaluate
/// from several threads at once.
class Field {
 public:
  explicit Field(std::shared_ptr<const FieldImpl> impl) : impl_(std::move(impl)) {}

  template <class Impl, class... Args>
  static Field make(Args&&... args) {
    return Field(std::make_shared<const Impl>(std::forward<Args>(args)...));
  }

  int dim() const { return impl_->dim(); }
  Jet jet(const Vec& x) const { return impl_->jet(x); }
  double value(const Vec& x) const { return impl_->value(x); }
  Vec gradient(const Vec& x) const { return impl_->jet(x).gradient; }
  double laplacian(const Vec& x) const { return impl_->jet(x).laplacian; }
  Domain domain() const { return impl_->domain(); }
  std::optional<double> decay_coefficient() const { return impl_->decay_coefficient(); }
  std::optional<Vec> radial_center() const { return impl_->radial_center(); }

  const FieldImpl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const FieldImpl> impl_;
};

}  // namespace bubbleforge
