#pragma once

#include <random>

#include "bubbleforge/vec.hpp"

namespace bftest {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline bubbleforge::Vec random_point(std::mt19937_64& g, int n, double scale) {
  bubbleforge::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(g, -scale, scale);
  return v;
}

/// Uniform direction times a radius drawn from [r_lo, r_hi].
inline bubbleforge::Vec random_shell_point(std::mt19937_64& g, int n, double r_lo, double r_hi) {
  std::normal_distribution<double> gauss;
  bubbleforge::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(g);
  return v * (uniform(g, r_lo, r_hi) / v.norm());
}

}  // namespace bftest
