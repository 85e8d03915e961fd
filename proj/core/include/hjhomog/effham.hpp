#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hjhomog/shape.hpp"

namespace hjhomog {

/// Constants derived from the field sup: kappa = 1 - vbar, and the extreme
/// admissible parameter pair (mu_star, sigma_star) where the family's speed
/// degenerates: sigma_star * sqrt(mu_star + vbar) = -1.
struct EffConstants {
  double vbar = 0.0;
  double kappa = 1.0;
  double mu_star = 1.0;
  double sigma_star = -1.0;

  static EffConstants from_vbar(double vbar);
};

/// Momentum-space region label. K1: flat hilltop at mu_star around p = 0.
/// K2: transition values in (0, mu_star). K3: flat valley at 0. K4: coercive
/// growth outside the unit ball.
enum class Region { K1, K2, K3, K4 };
const char* to_string(Region r);

/// Min over the shape's stored directions of m(e) - p.e. Nonnegative exactly
/// when the plane p.y supports the shape from below on the sampled
/// directions. -infinity for a void-family shape sentinel.
double support_gap(const ShapeFunction& shape, const Vec& p);

/// sup over the mu lattice of { mu : m_{mu,-1} dominates p } computed by
/// bisection (the gap decreases in mu). -infinity when already violated at
/// mu = 0.
double hbar_minus(const Vec& p, ShapeProvider& shapes);

/// inf over the mu lattice of { mu : m_{mu,+1} dominates p }, bisection on
/// the increasing gap. Throws when the bracket (|p|^2-1)^2 + vbar + 1 fails,
/// which indicates shape underestimation.
double hbar_plus(const Vec& p, ShapeProvider& shapes);

struct HbarValue {
  double value = 0.0;
  Region region = Region::K4;
  /// mu at the first tangency along the parameter path (mu_star for K1).
  double tangency_mu = 0.0;
  /// Set when the path-walk tangency and the bisection value disagree beyond
  /// 2 * mu_step, i.e. the monotonicity the construction relies on broke.
  bool flagged = false;
};

/// Value = hbar_minus if finite, else hbar_plus. The region comes from
/// walking the parameter path (mu_star,-1) -> (0,-1) -> (0,+1) -> (inf,+1):
/// the gap is nondecreasing along it, K1 means it is strictly positive
/// immediately after the start, and otherwise the first sign change lands in
/// the segment that names the region.
HbarValue hbar(const Vec& p, ShapeProvider& shapes);

/// Square (or segment, in 1D) momentum grid [-p_max, p_max]^dim with n_axis
/// nodes per axis.
struct PGrid {
  double p_max = 2.0;
  int n_axis = 11;
  int dim = 2;

  std::size_t count() const;
  Vec node(std::size_t idx) const;
  double step() const { return n_axis > 1 ? 2.0 * p_max / (n_axis - 1) : 0.0; }
};

struct EffectiveHamiltonian {
  PGrid pgrid;
  std::vector<Vec> nodes;
  std::vector<double> values;
  std::vector<Region> regions;
  std::vector<double> tangency_mu;
  std::vector<std::uint8_t> flagged;
  EffConstants constants;

  /// Multilinear interpolation over the momentum grid, clamped at the edges.
  double value_interp(const Vec& p) const;
  /// Max finite-difference slope over grid edges; a Lipschitz surrogate for
  /// time-step control in the evolution solver.
  double slope_bound() const;
};

/// Evaluates hbar on every grid node against one shared shape cache.
EffectiveHamiltonian tabulate(const PGrid& pgrid, ShapeProvider& shapes);

/// n_uniform evenly spaced unit vectors plus the direction of every nonzero
/// momentum node, deduplicated. Aligning the direction menu with the nodes
/// costs nothing extra per solve and removes the angular interpolation error
/// from the support function exactly where the table reads it.
std::vector<Vec> augmented_directions(const PGrid& pgrid, int n_uniform);

}  // namespace hjhomog
