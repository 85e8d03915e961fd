#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hjhomog/effham.hpp"
#include "hjhomog/grid.hpp"
#include "hjhomog/potential.hpp"

namespace hjhomog {

struct InitialData {
  std::function<double(const Vec&)> g;
  double lip = 1.0;  ///< Lipschitz constant of g (sizes the dissipation)
  std::string name;
};

struct EvolveOptions {
  double spacing = 1.0 / 256;
  double inner_radius = 1.0;  ///< the ball that must stay unpolluted
  double t_final = 1.0;
  std::vector<double> slice_times;  ///< empty: {0, t_final/10, ..., t_final}
  double margin = 0.5;  ///< extra box beyond inner_radius + T * wavespeed
  double cfl = 0.4;

  std::vector<double> resolved_slices() const;
};

/// One evolution run. epsilon == 0 marks a homogenized run.
struct EvolutionResult {
  Grid grid;
  double epsilon = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> slices;  ///< one field per recorded time
  double alpha = 0.0;
  double tau = 0.0;
  std::string data_name;
};

/// Forward-Euler Lax-Friedrichs solve of u_t + (|Du|^2-1)^2 - V(x/eps) = 0.
/// The box half-extent is inner_radius + T * alpha + margin so the inner
/// ball never feels the extrapolation boundary. The run aborts if a central
/// gradient leaves the ball the dissipation was designed for. Requires
/// spacing <= eps/8 so the oscillation is resolved.
EvolutionResult solve_oscillatory(const EnsembleSpec& spec, std::uint64_t realization,
                                  double epsilon, const InitialData& data,
                                  const EvolveOptions& opt);

/// Same scheme driven by the tabulated effective Hamiltonian through its
/// interpolant only; dissipation from the table's finite-difference slope
/// bound. Throws if a gradient leaves the table's momentum range.
EvolutionResult solve_homogenized(const EffectiveHamiltonian& table,
                                  const InitialData& data, const EvolveOptions& opt);

/// Sup over the ball |x| <= k and all recorded slices with time <= k of
/// |a - b|. Grids and slice times must match.
double compare_sup(const EvolutionResult& a, const EvolutionResult& b, double k);

/// Sup over |x| <= k and recorded slices of |u - (p.x - t hbar_value)|.
double sup_error_vs_plane(const EvolutionResult& r, const Vec& p,
                          double hbar_value, double k);

}  // namespace hjhomog
