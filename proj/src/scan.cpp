#include "bubbleforge/scan.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "bubbleforge/field_core.hpp"

namespace bubbleforge {

std::size_t GridDescriptor::size() const {
  if (axes.empty()) return 0;
  std::size_t s = 1;
  for (const auto& a : axes) s *= static_cast<std::size_t>(std::max(a.count, 0));
  return s;
}

void GridDescriptor::params(std::size_t flat, std::span<double> out) const {
  for (std::size_t i = axes.size(); i-- > 0;) {
    const auto c = static_cast<std::size_t>(axes[i].count);
    out[i] = axes[i].node(static_cast<int>(flat % c));
    flat /= c;
  }
}

namespace {

struct Best {
  bool found = false;
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  std::size_t samples = 0;
};

// larger value wins, ties go to the smaller flat index
bool better(double v, std::size_t k, const Best& b) {
  return !b.found || v > b.value || (v == b.value && k < b.index);
}

std::optional<double> evaluate(const GridDescriptor& grid, const ParamMap& map, const Objective& obj,
                               std::size_t k, std::vector<double>& p) {
  grid.params(k, p);
  const auto x = map(p);
  if (!x) return std::nullopt;
  const double v = obj(*x);
  if (std::isnan(v)) throw NumericalFailure("scan objective is NaN at " + x->str());
  return v;
}

ScanHit finish(const GridDescriptor& grid, const ParamMap& map, const Best& b) {
  ScanHit hit;
  hit.n_samples = b.samples;
  if (!b.found) return hit;
  hit.found = true;
  hit.value = b.value;
  hit.index = b.index;
  hit.params.resize(grid.axes.size());
  grid.params(b.index, hit.params);
  hit.point = *map(hit.params);
  return hit;
}

}  // namespace

ScanHit scan_max_serial(const GridDescriptor& grid, const ParamMap& map, const Objective& obj) {
  const std::size_t total = grid.size();
  std::vector<double> p(grid.axes.size());
  Best b;
  for (std::size_t k = 0; k < total; ++k) {
    const auto v = evaluate(grid, map, obj, k, p);
    if (!v) continue;
    ++b.samples;
    if (better(*v, k, b)) b = {true, *v, k, b.samples};
  }
  return finish(grid, map, b);
}

ScanHit scan_max_parallel(const GridDescriptor& grid, const ParamMap& map, const Objective& obj) {
  const auto total = static_cast<std::ptrdiff_t>(grid.size());
  const int nt = omp_get_max_threads();
  std::vector<Best> best(nt);
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> err_index(nt, none);
  std::vector<std::exception_ptr> err(nt);

#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    std::vector<double> p(grid.axes.size());
    Best local;
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
      if (err_index[t] != none) continue;
      try {
        const auto v = evaluate(grid, map, obj, static_cast<std::size_t>(k), p);
        if (!v) continue;
        ++local.samples;
        if (better(*v, static_cast<std::size_t>(k), local)) {
          local.found = true;
          local.value = *v;
          local.index = static_cast<std::size_t>(k);
        }
      } catch (...) {
        err_index[t] = static_cast<std::size_t>(k);
        err[t] = std::current_exception();
      }
    }
    best[t] = local;
  }

  const auto first_err = std::min_element(err_index.begin(), err_index.end());
  if (*first_err != none) std::rethrow_exception(err[first_err - err_index.begin()]);

  Best b;
  std::size_t samples = 0;
  for (const auto& l : best) {
    samples += l.samples;
    if (l.found && better(l.value, l.index, b)) b = l;
  }
  b.samples = samples;
  return finish(grid, map, b);
}

RefinedScan scan_max_refined(const GridDescriptor& grid, const ParamMap& map, const Objective& obj,
                             const RefineOptions& opt) {
  const auto run = [&](const GridDescriptor& g) {
    return opt.parallel ? scan_max_parallel(g, map, obj) : scan_max_serial(g, map, obj);
  };
  RefinedScan out;
  out.coarse = grid;
  out.finest = grid;
  out.hit = run(grid);
  out.n_samples = out.hit.n_samples;
  if (!out.hit.found) return out;

  GridDescriptor cur = grid;
  for (int level = 0; level < opt.levels; ++level) {
    GridDescriptor fine;
    bool any = false;
    for (std::size_t i = 0; i < cur.axes.size(); ++i) {
      const GridAxis& a = cur.axes[i];
      const GridAxis& root = grid.axes[i];
      if (a.count <= 1 || a.spacing() == 0.0) {
        fine.axes.push_back(a);
        continue;
      }
      const double h = a.spacing();
      const double c = out.hit.params[i];
      const double lo = std::max(std::min(root.lo, root.hi), c - opt.window_cells * h);
      const double hi = std::min(std::max(root.lo, root.hi), c + opt.window_cells * h);
      const int cells = std::max(1, static_cast<int>(std::lround((hi - lo) / (h / opt.factor))));
      fine.axes.push_back({lo, hi, cells + 1});
      any = true;
    }
    if (!any) break;
    const ScanHit hit = run(fine);
    out.n_samples += hit.n_samples;
    out.finest = fine;
    if (hit.found && hit.value > out.hit.value) out.hit = hit;
    cur = fine;
  }
  out.hit.n_samples = out.n_samples;
  return out;
}

int default_points_per_axis(int n) {
  switch (n) {
    case 3: return 64;
    case 4: return 24;
    case 5: return 12;
    default: return 8;
  }
}

Vec sphere_point(std::span<const double> angles, int n) {
  Vec x(n);
  double s = 1.0;
  for (int k = 0; k < n - 2; ++k) {
    x[k] = s * std::cos(angles[k]);
    s *= std::sin(angles[k]);
  }
  x[n - 2] = s * std::cos(angles[n - 2]);
  x[n - 1] = s * std::sin(angles[n - 2]);
  return x;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct GridBuilder {
  int n;
  const GridSpec& spec;

  int pts() const { return spec.points_per_axis > 0 ? spec.points_per_axis : default_points_per_axis(n); }

  RegionGrid operator()(const BoxRegion& b) const {
    RegionGrid rg;
    for (int i = 0; i < n; ++i) rg.grid.axes.push_back({b.lo[i], b.hi[i], pts()});
    rg.map = [](std::span<const double> p) -> std::optional<Vec> { return Vec::from_span(p); };
    return rg;
  }

  RegionGrid operator()(const BallRegion& b) const {
    RegionGrid rg;
    for (int i = 0; i < n; ++i) rg.grid.axes.push_back({b.center[i] - b.radius, b.center[i] + b.radius, pts()});
    const double r2 = b.radius * b.radius * (1.0 + 1e-12);
    rg.map = [c = b.center, r2](std::span<const double> p) -> std::optional<Vec> {
      Vec x = Vec::from_span(p);
      if ((x - c).norm2() > r2) return std::nullopt;
      return x;
    };
    return rg;
  }

  RegionGrid operator()(const AnnulusRegion& a) const {
    if (!(a.r_in >= 0.0 && a.r_in < a.r_out)) throw BadRadii("annulus needs 0 <= r_in < r_out");
    RegionGrid rg;
    const int m = pts();
    rg.grid.axes.push_back({a.r_in, a.r_out, m});
    for (int k = 0; k < n - 2; ++k) rg.grid.axes.push_back({0.0, std::numbers::pi, m});
    rg.grid.axes.push_back({0.0, kTwoPi * (1.0 - 0.5 / m), 2 * m});
    const int dim = n;
    rg.map = [c = a.center, dim](std::span<const double> p) -> std::optional<Vec> {
      return c + sphere_point(p.subspan(1), dim) * p[0];
    };
    return rg;
  }

  RegionGrid operator()(const RadialSegment& s) const {
    if (!(s.r_lo >= 0.0 && s.r_lo <= s.r_hi)) throw BadRadii("radial segment needs 0 <= r_lo <= r_hi");
    RegionGrid rg;
    rg.grid.axes.push_back({s.r_lo, s.r_hi, std::max(spec.radial_points, 2)});
    const int dim = n;
    rg.map = [c = s.center, dim](std::span<const double> p) -> std::optional<Vec> {
      return c + Vec::unit(dim, 0, p[0]);
    };
    return rg;
  }
};

}  // namespace

RegionGrid region_grid(const ScanRegion& region, int n, const GridSpec& spec) {
  return std::visit(GridBuilder{n, spec}, region);
}

KReport scan_region_max(const ScanRegion& region, int n, const Objective& obj, const GridSpec& spec) {
  const RegionGrid rg = region_grid(region, n, spec);
  const RefinedScan rs = scan_max_refined(rg.grid, rg.map, obj, spec.refine);
  if (!rs.hit.found) throw InvalidInput("scan region contains no admissible grid point");
  return {rs.hit.value, rs.hit.point, rs.finest, rs.n_samples};
}

KReport sup_scan(const Field& f, const ScanRegion& region, const GridSpec& spec) {
  const int n = f.dim();
  ScanRegion r = region;
  if (spec.use_radial_symmetry) {
    if (const auto c = f.radial_center()) {
      if (const auto* b = std::get_if<BallRegion>(&region); b && b->center == *c)
        r = RadialSegment{*c, 0.0, b->radius};
      else if (const auto* a = std::get_if<AnnulusRegion>(&region); a && a->center == *c)
        r = RadialSegment{*c, a->r_in, a->r_out};
    }
  }
  RegionGrid rg = region_grid(r, n, spec);
  const Domain dom = f.domain();
  rg.map = [inner = rg.map, dom](std::span<const double> p) -> std::optional<Vec> {
    auto x = inner(p);
    if (x && !dom.contains(*x)) return std::nullopt;
    return x;
  };
  const auto obj = [&f](const Vec& x) { return std::abs(k_function(f, x) - 1.0); };
  const RefinedScan rs = scan_max_refined(rg.grid, rg.map, obj, spec.refine);
  if (!rs.hit.found) throw InvalidInput("scan region contains no admissible grid point");
  return {rs.hit.value, rs.hit.point, rs.finest, rs.n_samples};
}

}  // namespace bubbleforge
