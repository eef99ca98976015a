#pragma once

#include <optional>
#include <vector>

#include "bubbleforge/field_core.hpp"
#include "bubbleforge/scan.hpp"

namespace bubbleforge {

inline constexpr double kOuterRadius = 5.0 / 8.0;

struct BlowupInput {
  Field field;                ///< positive on B(0, 5/8) \ B(0, eps)
  double epsilon = 0.1;
  double R = 2.0;             ///< fit window radius in rescaled units
  double delta_target = 1e-2;
  double shift_radius = 5.0;  ///< largest center shift, in units of lambda
  std::vector<Ball> excluded; ///< balls removed from the search (excision)
  GridSpec grid{};            ///< points_per_axis == 0 picks a default per dimension
};

/// d_eps(x) = min(|x| - eps, 5/8 - |x|).
double d_eps(const Vec& x, double epsilon);

struct WeightedMax {
  Vec x_o;
  double M_eps = 0.0;
  std::size_t n_samples = 0;
};

/// Maximizes U = d_eps^((n-2)/2) u over the annulus minus the excluded balls.
/// Throws InvalidInput for a bad annulus.
WeightedMax weighted_max(const BlowupInput& inp);

struct Rescaled {
  Field w;
  double lambda = 0.0;  ///< u(x_center)^(-2/(n-2))
  double window = 0.0;  ///< largest admissible |x|: d_eps(x_center) / (2 lambda)
};

/// w(x) = lambda^((n-2)/2) u(x_center + lambda x), so w(0) = 1. Evaluating w
/// outside |x| <= window throws OutOfDomain.
Rescaled rescale(const BlowupInput& inp, const Vec& x_center);

struct BubbleFit {
  double mu = 1.0;
  Vec y_o;
  double delta_measured = 0.0;  ///< sampled max of |dw| + |d grad w| + |d lap w|
  int iterations = 0;
};

/// Gauss-Newton fit of u_{mu, y} to w on B(0, R) in the variables (log mu, y),
/// started at (1, 0). Throws FitDiverged if mu leaves [1e-6, 1e6].
BubbleFit fit_bubble(const Field& w, double R, int points_per_axis = 0);

struct BubbleReport {
  Vec x_o;
  double M_eps = 0.0;
  double lambda = 0.0;          ///< rescaling length at x_1
  double lambda_consistency = 0.0;  ///< d_eps(x_o) / M_eps^(2/(n-2))
  Vec x_1;                      ///< shifted center
  double mu = 0.0;              ///< fitted scale in rescaled units
  Vec y_o;
  double delta_measured = 0.0;
  double shift = 0.0;           ///< |x_1 - x_o|
  /// The recovered bubble in original coordinates: scale lambda mu, center x_1 + lambda y_o.
  Bubble bubble() const { return Bubble(lambda * mu, x_1 + y_o * lambda); }
};

/// Weighted max, center shift, rescale and fit. Empty when the fit misses the
/// target or fails to converge.
std::optional<BubbleReport> detect(const BlowupInput& inp);

/// Repeated detection, excising B(x_1, max(lambda R, 3 coarse cells)) after each hit.
std::vector<BubbleReport> detect_all(BlowupInput inp, int max_bubbles);

}  // namespace bubbleforge
