#include "hjhomog/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjhomog {

double dot(const Vec& a, const Vec& b, int dim) {
  double s = a[0] * b[0];
  if (dim == 2) s += a[1] * b[1];
  return s;
}

double norm(const Vec& a, int dim) {
  return std::sqrt(dot(a, a, dim));
}

Grid Grid::make(int dim, double spacing, double half_extent, bool periodic,
                Vec center) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (!(spacing > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
  if (!(half_extent > 0.0)) throw std::invalid_argument("grid: half_extent must be positive");
  const double ratio = 2.0 * half_extent / spacing;
  const double r = std::round(ratio);
  if (std::abs(ratio - r) > 1e-9 * std::max(1.0, ratio) || r < 1.0) {
    throw std::invalid_argument("grid: spacing must divide 2*half_extent exactly");
  }
  Grid g;
  g.dim = dim;
  g.spacing = spacing;
  g.half_extent = half_extent;
  g.periodic = periodic;
  g.center = center;
  g.n_axis = static_cast<int>(r) + (periodic ? 0 : 1);
  return g;
}

std::size_t Grid::node_count() const {
  std::size_t n = static_cast<std::size_t>(n_axis);
  return dim == 2 ? n * n : n;
}

Vec Grid::node_coord(std::size_t idx) const {
  Vec x{0.0, 0.0};
  x[0] = axis_coord(axis_of(idx, 0), 0);
  if (dim == 2) x[1] = axis_coord(axis_of(idx, 1), 1);
  return x;
}

namespace {

int locate_axis(double rel, double spacing, double half_extent, bool periodic,
                int n_axis) {
  if (periodic) {
    const double span = 2.0 * half_extent;
    double u = std::fmod(rel + half_extent, span);
    if (u < 0.0) u += span;
    int i = static_cast<int>(std::lround(u / spacing)) % n_axis;
    return i;
  }
  double u = rel + half_extent;
  int i = static_cast<int>(std::lround(u / spacing));
  if (i < 0) i = 0;
  if (i > n_axis - 1) i = n_axis - 1;
  return i;
}

}  // namespace

std::size_t Grid::nearest_node(const Vec& x) const {
  const int i = locate_axis(x[0] - center[0], spacing, half_extent, periodic, n_axis);
  if (dim == 1) return index(i);
  const int j = locate_axis(x[1] - center[1], spacing, half_extent, periodic, n_axis);
  return index(i, j);
}

bool Grid::contains(const Vec& x, double slack) const {
  for (int a = 0; a < dim; ++a) {
    if (std::abs(x[a] - center[a]) > half_extent + slack) return false;
  }
  return true;
}

namespace {

double interp_axis_locate(double rel, const Grid& g, int& i0, int& i1) {
  const double span = 2.0 * g.half_extent;
  double u;
  if (g.periodic) {
    u = std::fmod(rel + g.half_extent, span);
    if (u < 0.0) u += span;
  } else {
    u = std::clamp(rel + g.half_extent, 0.0, span);
  }
  double t = u / g.spacing;
  int i = static_cast<int>(std::floor(t));
  double frac = t - i;
  if (g.periodic) {
    i %= g.n_axis;
    i0 = i;
    i1 = (i + 1) % g.n_axis;
  } else {
    if (i > g.n_axis - 2) {
      i = g.n_axis - 2;
      frac = 1.0;
    }
    i0 = i;
    i1 = i + 1;
  }
  return frac;
}

}  // namespace

double grid_interp(const Grid& g, const std::vector<double>& values, const Vec& x) {
  int i0, i1;
  const double tx = interp_axis_locate(x[0] - g.center[0], g, i0, i1);
  if (g.dim == 1) {
    return (1.0 - tx) * values[i0] + tx * values[i1];
  }
  int j0, j1;
  const double ty = interp_axis_locate(x[1] - g.center[1], g, j0, j1);
  const double v00 = values[g.index(i0, j0)];
  const double v10 = values[g.index(i1, j0)];
  const double v01 = values[g.index(i0, j1)];
  const double v11 = values[g.index(i1, j1)];
  return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) +
         ty * ((1.0 - tx) * v01 + tx * v11);
}

}  // namespace hjhomog
