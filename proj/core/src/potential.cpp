#include "hjhomog/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hjhomog/rng.hpp"

namespace hjhomog {

const char* to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::Constant: return "constant";
    case EnsembleKind::ShiftedPeriodic: return "shifted_periodic";
    case EnsembleKind::PoissonBumps: return "poisson_bumps";
  }
  return "?";
}

EnsembleKind ensemble_kind_from_string(const std::string& s) {
  if (s == "constant") return EnsembleKind::Constant;
  if (s == "shifted_periodic") return EnsembleKind::ShiftedPeriodic;
  if (s == "poisson_bumps") return EnsembleKind::PoissonBumps;
  throw std::invalid_argument("unknown ensemble kind: " + s);
}

void EnsembleSpec::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("ensemble: dim must be 1 or 2");
  if (!(k0 >= 0.0)) throw std::invalid_argument("ensemble: k0 must be nonnegative");
  switch (kind) {
    case EnsembleKind::Constant:
      if (std::abs(level) > k0) throw std::invalid_argument("ensemble: |level| exceeds k0");
      break;
    case EnsembleKind::ShiftedPeriodic:
      if (!(period > 0.0)) throw std::invalid_argument("ensemble: period must be positive");
      if (!(amplitude >= 0.0)) throw std::invalid_argument("ensemble: amplitude must be nonnegative");
      if (2.0 * amplitude > k0 + 1e-12)
        throw std::invalid_argument("ensemble: profile range 2*amplitude exceeds k0");
      break;
    case EnsembleKind::PoissonBumps:
      if (!(intensity >= 0.0)) throw std::invalid_argument("ensemble: intensity must be nonnegative");
      if (!(bump_radius > 0.0)) throw std::invalid_argument("ensemble: bump_radius must be positive");
      if (!(bump_height >= 0.0)) throw std::invalid_argument("ensemble: bump_height must be nonnegative");
      if (bump_height > k0 + 1e-12)
        throw std::invalid_argument("ensemble: bump_height exceeds k0");
      break;
  }
}

double EnsembleSpec::correlation_length() const {
  switch (kind) {
    case EnsembleKind::Constant: return 1.0;
    case EnsembleKind::ShiftedPeriodic: return period;
    case EnsembleKind::PoissonBumps: return 2.0 * bump_radius;
  }
  return 1.0;
}

double EnsembleSpec::true_sup() const {
  switch (kind) {
    case EnsembleKind::Constant: return level;
    case EnsembleKind::ShiftedPeriodic: return 2.0 * amplitude;
    case EnsembleKind::PoissonBumps: return intensity > 0.0 ? k0 : 0.0;
  }
  return 0.0;
}

namespace {

struct Bump {
  double x, y;
};

// Poisson centers are drawn per integer lattice cell, keyed by the cell
// coordinates, so a realization is consistent across sampling boxes.
std::uint64_t cell_key(long cx, long cy) {
  auto zig = [](long v) -> std::uint64_t {
    return v >= 0 ? 2ull * static_cast<std::uint64_t>(v)
                  : 2ull * static_cast<std::uint64_t>(-v) - 1ull;
  };
  return (zig(cx) << 32) ^ zig(cy);
}

std::vector<Bump> bumps_in_cells(const EnsembleSpec& spec, std::uint64_t realization,
                                 long cx0, long cx1, long cy0, long cy1) {
  std::vector<Bump> out;
  for (long cy = cy0; cy <= cy1; ++cy) {
    for (long cx = cx0; cx <= cx1; ++cx) {
      RngStream rs(spec.seed, "bumps", realization, cell_key(cx, cy));
      const int n = rs.poisson(spec.intensity);
      for (int k = 0; k < n; ++k) {
        const double x = cx + rs.uniform01();
        const double y = spec.dim == 2 ? cy + rs.uniform01() : 0.0;
        out.push_back({x, y});
      }
    }
  }
  return out;
}

double bump_profile(double r2, double radius, double height) {
  if (r2 >= radius * radius) return 0.0;
  const double s = 1.0 - r2 / (radius * radius);
  return height * s * s;
}

void sample_bumps(const EnsembleSpec& spec, const Grid& grid,
                  std::uint64_t realization, std::vector<double>& v) {
  const double pad = spec.bump_radius;
  const double x0 = grid.center[0] - grid.half_extent - pad;
  const double x1 = grid.center[0] + grid.half_extent + pad;
  const long cx0 = static_cast<long>(std::floor(x0));
  const long cx1 = static_cast<long>(std::floor(x1));
  long cy0 = 0, cy1 = 0;
  if (grid.dim == 2) {
    const double y0 = grid.center[1] - grid.half_extent - pad;
    const double y1 = grid.center[1] + grid.half_extent + pad;
    cy0 = static_cast<long>(std::floor(y0));
    cy1 = static_cast<long>(std::floor(y1));
  }
  const std::vector<Bump> bumps = bumps_in_cells(spec, realization, cx0, cx1, cy0, cy1);

  // Bucket bumps by cell for local lookup.
  const long nx = cx1 - cx0 + 1;
  const long ny = cy1 - cy0 + 1;
  std::vector<std::vector<int>> bucket(static_cast<std::size_t>(nx * ny));
  for (int b = 0; b < static_cast<int>(bumps.size()); ++b) {
    const long bx = static_cast<long>(std::floor(bumps[b].x)) - cx0;
    const long by = grid.dim == 2 ? static_cast<long>(std::floor(bumps[b].y)) - cy0 : 0;
    bucket[static_cast<std::size_t>(by * nx + bx)].push_back(b);
  }

  const long reach = static_cast<long>(std::ceil(spec.bump_radius)) + 1;
  const std::size_t n = grid.node_count();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Vec p = grid.node_coord(idx);
    const long pcx = static_cast<long>(std::floor(p[0])) - cx0;
    const long pcy = grid.dim == 2 ? static_cast<long>(std::floor(p[1])) - cy0 : 0;
    double sum = 0.0;
    for (long by = std::max(0L, pcy - reach); by <= std::min(ny - 1, pcy + reach); ++by) {
      for (long bx = std::max(0L, pcx - reach); bx <= std::min(nx - 1, pcx + reach); ++bx) {
        for (int b : bucket[static_cast<std::size_t>(by * nx + bx)]) {
          const double dx = p[0] - bumps[b].x;
          const double dy = grid.dim == 2 ? p[1] - bumps[b].y : 0.0;
          sum += bump_profile(dx * dx + dy * dy, spec.bump_radius, spec.bump_height);
        }
      }
    }
    v[idx] = std::min(sum, spec.k0);
  }
}

}  // namespace

PotentialField sample_potential(const EnsembleSpec& spec, const Grid& grid,
                                std::uint64_t realization) {
  spec.validate();
  if (grid.dim != spec.dim) throw std::invalid_argument("sample_potential: grid/spec dim mismatch");
  PotentialField f;
  f.grid = grid;
  f.values.assign(grid.node_count(), 0.0);

  switch (spec.kind) {
    case EnsembleKind::Constant:
      std::fill(f.values.begin(), f.values.end(), spec.level);
      break;
    case EnsembleKind::ShiftedPeriodic: {
      RngStream rs(spec.seed, "shift", realization);
      const double sx = rs.uniform(0.0, spec.period);
      const double sy = spec.dim == 2 ? rs.uniform(0.0, spec.period) : 0.0;
      const double w = 2.0 * std::numbers::pi / spec.period;
      const std::size_t n = grid.node_count();
      for (std::size_t idx = 0; idx < n; ++idx) {
        const Vec p = grid.node_coord(idx);
        double val = spec.amplitude * (1.0 - std::cos(w * (p[0] + sx)));
        if (spec.dim == 2) {
          val = 0.5 * (val + spec.amplitude * (1.0 - std::cos(w * (p[1] + sy))));
        }
        f.values[idx] = val;
      }
      break;
    }
    case EnsembleKind::PoissonBumps:
      sample_bumps(spec, grid, realization, f.values);
      break;
  }

  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  f.vlow = *lo;
  f.vbar = *hi;
  return f;
}

PotentialField field_from_values(const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.node_count())
    throw std::invalid_argument("field_from_values: size mismatch");
  PotentialField f;
  f.grid = grid;
  f.values = std::move(values);
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  f.vlow = *lo;
  f.vbar = *hi;
  return f;
}

void normalize(PotentialField& f) {
  if (f.values.empty()) throw std::invalid_argument("normalize: empty field");
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  const double shift = *lo;
  if (shift != 0.0) {
    for (double& v : f.values) v -= shift;
  }
  if (!f.normalized) f.vlow = shift;
  f.vbar = *hi - shift;
  f.normalized = true;
}

double PotentialField::value_at(const Vec& x) const {
  return grid_interp(grid, values, x);
}

BoundsTable estimate_bounds(const EnsembleSpec& spec,
                            const std::vector<double>& radii, double spacing,
                            int realizations) {
  if (radii.empty()) throw std::invalid_argument("estimate_bounds: no radii");
  if (realizations < 1) throw std::invalid_argument("estimate_bounds: need realizations >= 1");
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());

  BoundsTable t;
  t.radii = rs;
  t.vmin.assign(rs.size(), std::vector<double>(realizations, 0.0));
  t.vmax.assign(rs.size(), std::vector<double>(realizations, 0.0));

  const Grid big = Grid::make(spec.dim, spacing, rs.back());
  for (int r = 0; r < realizations; ++r) {
    const PotentialField f = sample_potential(spec, big, static_cast<std::uint64_t>(r));
    std::vector<double> mn(rs.size(), std::numeric_limits<double>::infinity());
    std::vector<double> mx(rs.size(), -std::numeric_limits<double>::infinity());
    const std::size_t n = big.node_count();
    for (std::size_t idx = 0; idx < n; ++idx) {
      const Vec p = big.node_coord(idx);
      double rho = std::abs(p[0]);
      if (big.dim == 2) rho = std::max(rho, std::abs(p[1]));
      // First listed radius whose box contains this node.
      const auto it = std::lower_bound(rs.begin(), rs.end(), rho - 1e-12);
      if (it == rs.end()) continue;
      const std::size_t b = static_cast<std::size_t>(it - rs.begin());
      mn[b] = std::min(mn[b], f.values[idx]);
      mx[b] = std::max(mx[b], f.values[idx]);
    }
    // Widening a box keeps previous nodes, so combine outward.
    for (std::size_t b = 1; b < rs.size(); ++b) {
      mn[b] = std::min(mn[b], mn[b - 1]);
      mx[b] = std::max(mx[b], mx[b - 1]);
    }
    for (std::size_t b = 0; b < rs.size(); ++b) {
      t.vmin[b][r] = mn[b];
      t.vmax[b][r] = mx[b];
    }
  }
  return t;
}

}  // namespace hjhomog
