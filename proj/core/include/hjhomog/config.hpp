#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjhomog/potential.hpp"

namespace hjhomog {

/// Raised for unreadable, unparsable, or invalid configuration input. The
/// command-line driver maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything one experiment needs: the ensemble, per-stage grids, parameter
/// ladders, tolerances, seeds, and the output root. Serialized as flat
/// key = value lines under [section] headers; serialize() and parse_string()
/// are exact inverses (doubles go through %.17g).
///
/// Ladder conventions enforced by validate(): mu, radii, cell_p ascending;
/// sigma ascending; delta and epsilon descending (they are refinement
/// ladders); all tolerances strictly positive.
struct ExperimentConfig {
  EnsembleSpec ensemble;

  // grids
  double metric_spacing = 1.0 / 32;
  double metric_target_radius = 1.0;
  double metric_box_factor = 1.5;
  double shape_spacing = 1.0 / 48;
  double shape_box_factor = 1.5;
  double cell_spacing = 1.0 / 256;
  double evolve_spacing_divisor = 32.0;  ///< oscillatory spacing = epsilon / divisor
  double evolve_inner_radius = 1.0;
  double evolve_t_final = 1.0;

  // ladders
  std::vector<double> mu_ladder = {0.0, 0.25};
  std::vector<double> sigma_ladder = {-1.0, 1.0};
  std::vector<double> delta_ladder = {0.1, 0.05, 0.025};
  std::vector<double> epsilon_ladder = {0.125, 0.0625, 0.03125};
  std::vector<double> radii = {25.0, 50.0, 100.0};
  std::vector<double> cell_p = {0.0, 0.5, 1.0, 1.5};  ///< momenta p = c * e1
  int n_directions = 32;
  double p_max = 2.0;
  int p_axis = 5;

  // tolerances
  double tol_mu = 1e-3;    ///< effective-Hamiltonian level resolution
  double tol_gap = 1e-3;   ///< support-gap slack in region labeling
  double tol_h = 0.05;     ///< effective-Hamiltonian value checks
  double tol_cell = 1e-6;  ///< discounted-solver residual factor
  double tol_hom = 0.05;   ///< homogenization-limit proxies

  // seeds
  std::uint64_t master_seed = 1234;
  int realizations = 8;

  // output
  std::string out_dir = "out";

  /// Throws ConfigError when a field is out of range or a ladder is
  /// unsorted/empty. parse_file/parse_string validate before returning.
  void validate() const;

  std::string serialize() const;
  static ExperimentConfig parse_string(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);
};

/// FNV-1a digest of the serialized text, as 16 hex digits. Identifies the
/// configuration in run records.
std::string config_digest(const ExperimentConfig& cfg);

}  // namespace hjhomog
