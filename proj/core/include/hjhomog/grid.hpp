#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace hjhomog {

/// Spatial point. The second component is ignored when dim == 1.
using Vec = std::array<double, 2>;

double dot(const Vec& a, const Vec& b, int dim);
double norm(const Vec& a, int dim);

/// Uniform node-centered grid on the box [center - R, center + R]^dim with
/// spacing h, nodes at center - R + i*h. h must divide 2R exactly. On a
/// periodic grid the duplicate right edge node is dropped, so an axis has
/// 2R/h nodes instead of 2R/h + 1.
struct Grid {
  int dim = 1;
  double spacing = 1.0;
  double half_extent = 1.0;
  bool periodic = false;
  Vec center{0.0, 0.0};
  int n_axis = 0;

  /// Validates the parameters and fills n_axis. Throws std::invalid_argument
  /// when h does not divide 2R or dim is out of range.
  static Grid make(int dim, double spacing, double half_extent,
                   bool periodic = false, Vec center = {0.0, 0.0});

  std::size_t node_count() const;

  double axis_coord(int i, int axis) const {
    return center[axis] - half_extent + i * spacing;
  }

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * n_axis + i;
  }

  int axis_of(std::size_t idx, int axis) const {
    return axis == 0 ? static_cast<int>(idx % n_axis)
                     : static_cast<int>(idx / n_axis);
  }

  Vec node_coord(std::size_t idx) const;

  /// Index of the node nearest to x (coordinates clamped, or wrapped when
  /// periodic).
  std::size_t nearest_node(const Vec& x) const;

  bool contains(const Vec& x, double slack = 0.0) const;
};

/// Multilinear interpolation of nodal values at x. Coordinates wrap on a
/// periodic grid and clamp to the boundary otherwise.
double grid_interp(const Grid& g, const std::vector<double>& values, const Vec& x);

}  // namespace hjhomog
