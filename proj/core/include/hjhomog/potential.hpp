#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hjhomog/grid.hpp"

namespace hjhomog {

enum class EnsembleKind { Constant, ShiftedPeriodic, PoissonBumps };

const char* to_string(EnsembleKind k);
EnsembleKind ensemble_kind_from_string(const std::string& s);

/// Description of a stationary ergodic potential ensemble with a hard
/// sup-norm bound k0. Realizations are nonnegative by construction, so
/// normalization only removes the (small) offset a finite grid leaves over
/// the true infimum.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Constant;
  int dim = 1;
  double k0 = 1.0;
  std::uint64_t seed = 0;

  // Constant
  double level = 0.0;

  // ShiftedPeriodic: per axis a*(1 - cos(2*pi*(x + shift)/period)), averaged
  // over axes in 2D; the shift is drawn uniformly over one period.
  double amplitude = 0.2;
  double period = 1.0;

  // PoissonBumps: centers from a unit-intensity-scaled Poisson process,
  // each carrying height*(1 - (r/radius)^2)^2, the sum clipped at k0.
  double intensity = 1.0;
  double bump_radius = 0.3;
  double bump_height = 0.4;

  void validate() const;  // throws std::invalid_argument

  /// Length scale over which realizations decorrelate; used to pick default
  /// shape radii.
  double correlation_length() const;

  /// Supremum of the ensemble over all of space (not just a finite box).
  double true_sup() const;
};

struct PotentialField {
  Grid grid;
  std::vector<double> values;
  double vbar = 0.0;  ///< max over the grid (after normalization: sup estimate)
  double vlow = 0.0;  ///< min over the grid before normalization
  bool normalized = false;

  /// Multilinear interpolation; coordinates wrap on periodic grids and clamp
  /// otherwise.
  double value_at(const Vec& x) const;
};

/// Samples one realization on the given grid. Deterministic in
/// (spec, grid, realization): the same key always yields bit-identical
/// fields, and PoissonBumps realizations are consistent across boxes (a
/// larger grid sees the same bumps plus new ones).
PotentialField sample_potential(const EnsembleSpec& spec, const Grid& grid,
                                std::uint64_t realization = 0);

/// Wraps explicit node values (tests, file import).
PotentialField field_from_values(const Grid& grid, std::vector<double> values);

/// Shifts values so the grid minimum is zero and records the bound estimates.
/// Idempotent: normalizing twice leaves the field bit-identical.
void normalize(PotentialField& f);

struct BoundsTable {
  std::vector<double> radii;
  // [radius][realization]
  std::vector<std::vector<double>> vmin;
  std::vector<std::vector<double>> vmax;
};

/// Grid min/max per box radius and realization, each realization restricted
/// from a single sample at the largest radius so widening is monotone by
/// construction.
BoundsTable estimate_bounds(const EnsembleSpec& spec,
                            const std::vector<double>& radii, double spacing,
                            int realizations);

}  // namespace hjhomog
