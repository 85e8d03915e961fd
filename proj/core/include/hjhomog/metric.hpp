#pragma once

#include <cstdint>
#include <vector>

#include "hjhomog/grid.hpp"
#include "hjhomog/potential.hpp"

namespace hjhomog {

/// Parameters (mu, sigma) of one member of the gradient-constraint family
/// |Du|^2 = 1 + sigma*sqrt(mu + V). The family is void (distance identically
/// -infinity) exactly when sigma*sqrt(mu + vbar) < -1.
struct ParamPair {
  double mu = 0.0;
  double sigma = 0.0;

  bool admissible(double vbar) const;
};

enum class MetricStatus { Finite, NegInfinity };

/// Point-to-set distance field for one parameter pair: values[i] approximates
/// the maximal-subsolution gap m(y_i, source). Values are reliable inside
/// |y - source| <= trust_radius; the solve box extends beyond it so boundary
/// truncation cannot pollute trusted nodes.
struct MetricField {
  Grid grid;  // centered at the source
  std::vector<double> values;
  ParamPair params;
  Vec source{0.0, 0.0};
  double trust_radius = 0.0;
  MetricStatus status = MetricStatus::Finite;
  long degenerate_nodes = 0;  ///< nodes where the local speed vanished

  double value_at(const Vec& y) const;  ///< multilinear, absolute coordinates
};

struct MetricOptions {
  double target_radius = 1.0;  ///< trust radius
  double box_factor = 1.5;     ///< solve box half-extent = factor * target
  double spacing = 0.0;        ///< 0: inherit the field grid spacing
  /// The source disk is initialized from the local speed instead of marching
  /// through the point singularity; its radius adapts to the speed's local
  /// oscillation up to this fraction of the target radius.
  double init_cap_frac = 0.9;
  /// >0: pin the 2D seed-disk radius instead of adapting it. Solves that are
  /// compared node-wise need the same disk, otherwise they differ by the
  /// seeding rule and not just by the speed field. Ignored in 1D (no disk).
  double init_radius = 0.0;
  double degenerate_floor = 1e-10;
};

/// Local squared speed 1 + sigma*sqrt(mu + V(x)). May be negative for
/// inadmissible parameters.
double speed_squared(const PotentialField& field, ParamPair prm, const Vec& x);

/// Computes the distance field from `source`. 1D uses exact cumulative
/// Simpson integration of the speed (8 panels per grid interval); 2D uses
/// first-order upwind fast marching with the two-neighbor quadratic update,
/// heap ties broken by node index.
MetricField solve_metric(const PotentialField& field, ParamPair prm,
                         Vec source, const MetricOptions& opt);

struct SubsolutionReport {
  double max_symmetry_defect = 0.0;
  double max_subadd_defect = 0.0;
  double max_cone_lower_violation = 0.0;  ///< lower cone bound minus m
  double max_cone_upper_violation = 0.0;  ///< m minus upper cone bound
  int pairs = 0;
  int triples = 0;
};

/// Samples extra sources and checks the exchange symmetry m(y,z) = m(z,y),
/// the triangle inequality, and the two-sided cone bounds implied by the
/// speed extremes. Defects are maxima over the sampled pairs/triples.
/// snap_spacing > 0 snaps the sources to that lattice instead of the solve
/// grid, so runs at different resolutions probe identical source pairs
/// (the coarse lattice must be a sublattice of each solve grid).
SubsolutionReport check_subsolution_properties(const PotentialField& field,
                                               ParamPair prm,
                                               const MetricOptions& opt,
                                               int n_sources, int n_triples,
                                               std::uint64_t seed,
                                               double snap_spacing = 0.0);

}  // namespace hjhomog
