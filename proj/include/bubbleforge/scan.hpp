#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "bubbleforge/field.hpp"

namespace bubbleforge {

/// count equally spaced nodes from lo to hi inclusive (count == 1 gives lo).
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  double node(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
  double spacing() const { return count == 1 ? 0.0 : (hi - lo) / (count - 1); }
};

/// Tensor grid over a parameter box, flattened row major (last axis fastest),
/// so flat order is lexicographic order of the multi-index.
struct GridDescriptor {
  std::vector<GridAxis> axes;

  std::size_t size() const;
  void params(std::size_t flat, std::span<double> out) const;
};

/// Parameters to a point; nullopt marks a node outside the region.
using ParamMap = std::function<std::optional<Vec>(std::span<const double>)>;
using Objective = std::function<double(const Vec&)>;

struct ScanHit {
  bool found = false;
  double value = 0.0;
  Vec point;
  std::vector<double> params;
  std::size_t index = 0;
  std::size_t n_samples = 0;
};

/// Reference implementation: one thread, flat order, first maximum wins.
ScanHit scan_max_serial(const GridDescriptor& grid, const ParamMap& map, const Objective& obj);

/// OpenMP version. Same result as the serial one bit for bit: each thread keeps
/// its best (value, index) pair and the reduction prefers the larger value,
/// then the smaller index. Exceptions from the objective are rethrown for the
/// smallest failing index. A NaN objective raises NumericalFailure.
ScanHit scan_max_parallel(const GridDescriptor& grid, const ParamMap& map, const Objective& obj);

struct RefineOptions {
  int factor = 10;       ///< spacing divisor per level
  int window_cells = 1;  ///< half-width of the refined box, in coarse cells
  int levels = 1;
  bool parallel = true;
};

struct RefinedScan {
  ScanHit hit;
  GridDescriptor coarse;
  GridDescriptor finest;
  std::size_t n_samples = 0;
};

/// Coarse max followed by `levels` passes on a box around the running argmax.
RefinedScan scan_max_refined(const GridDescriptor& grid, const ParamMap& map, const Objective& obj,
                             const RefineOptions& opt = {});

// Regions -----------------------------------------------------------------

struct BoxRegion {
  Vec lo, hi;
};
struct BallRegion {
  Vec center;
  double radius = 0.0;
};
struct AnnulusRegion {
  Vec center;
  double r_in = 0.0, r_out = 0.0;
};
/// Segment center + r e_1, r in [r_lo, r_hi]; the exact domain for radial fields.
struct RadialSegment {
  Vec center;
  double r_lo = 0.0, r_hi = 0.0;
};

using ScanRegion = std::variant<BoxRegion, BallRegion, AnnulusRegion, RadialSegment>;

struct GridSpec {
  int points_per_axis = 0;  ///< 0 picks default_points_per_axis(n)
  int radial_points = 4001;
  RefineOptions refine{};
  /// Scan a ball or annulus about a field's radial center along one ray.
  bool use_radial_symmetry = true;
};

int default_points_per_axis(int n);

/// Point on the unit sphere S^(n-1) from n-1 hyperspherical angles
/// (theta_1..theta_(n-2) in [0, pi], phi in [0, 2 pi)).
Vec sphere_point(std::span<const double> angles, int n);

struct RegionGrid {
  GridDescriptor grid;
  ParamMap map;
};

RegionGrid region_grid(const ScanRegion& region, int n, const GridSpec& spec);

/// Grid record of sup |K - 1|.
struct KReport {
  double sup_abs_dev = 0.0;
  Vec argmax;
  GridDescriptor grid;  ///< finest grid visited
  std::size_t n_samples = 0;
};

/// Refined grid max of obj over the region.
KReport scan_region_max(const ScanRegion& region, int n, const Objective& obj, const GridSpec& spec = {});

/// sup of |K_f - 1| over the region. Balls and annuli centered on the field's
/// radial center collapse to one ray when the spec allows.
KReport sup_scan(const Field& f, const ScanRegion& region, const GridSpec& spec = {});

}  // namespace bubbleforge
