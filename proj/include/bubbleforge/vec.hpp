#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace bubbleforge {

inline constexpr int kMaxDim = 8;

/// Fixed-capacity point/vector in R^n, n <= kMaxDim. Value type, no heap.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
  }
  Vec(std::initializer_list<double> xs) : Vec(static_cast<int>(xs.size())) {
    int i = 0;
    for (double x : xs) c_[i++] = x;
  }

  static Vec zeros(int dim) { return Vec(dim); }
  static Vec unit(int dim, int axis, double scale = 1.0) {
    Vec v(dim);
    v.c_[axis] = scale;
    return v;
  }
  static Vec from_span(std::span<const double> xs) {
    Vec v(static_cast<int>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) v.c_[i] = xs[i];
    return v;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }
  Vec& operator/=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] /= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator-(Vec a) { return a *= -1.0; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a /= s; }
  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(c_[i])) return false;
    return true;
  }

  std::string str() const;

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

struct Ball {
  Vec center;
  double radius = 0.0;
  bool contains(const Vec& x) const { return distance(x, center) < radius; }
};

}  // namespace bubbleforge
