#pragma once

#include <vector>

#include "hjhomog/grid.hpp"
#include "hjhomog/potential.hpp"

namespace hjhomog {

struct CellSolution {
  Grid grid;
  std::vector<double> values;
  Vec p{0.0, 0.0};
  double delta = 0.0;
  double residual = 0.0;  ///< final max-norm of the discrete equation
  long iterations = 0;    ///< full sweeps
  double minus_delta_v0 = 0.0;
  double alpha = 0.0;  ///< dissipation coefficient used
  double tau = 0.0;    ///< pseudo-time step used
  double max_grad = 0.0;  ///< max one-sided difference quotient at convergence
};

struct CellOptions {
  double spacing = 0.0;  ///< 0: inherit the field grid spacing
  /// Box half-extent = s_factor / delta for non-periodic fields; 0 picks the
  /// a-priori localization default 2 (1 + sqrt(vbar + 1)).
  double s_factor = 0.0;
  double tol_factor = 1e-6;  ///< tol_cell = tol_factor (1 + (|p|^2-1)^2 + vbar)
  long max_sweeps = 2'000'000;
  double cfl = 0.4;
  /// Zero the spatial mean of the residual each sweep by a constant shift.
  /// Constants move the residual by exactly delta * c, so this removes the
  /// discount-limited slow mode without changing the fixed point; the
  /// converged residual remains the correctness certificate.
  bool mean_correction = true;
  const CellSolution* warm_start = nullptr;  ///< rescaled initial guess
};

/// Solves the discounted stationary problem
///   delta v + (|p + Dv|^2 - 1)^2 - V = 0
/// by a Lax-Friedrichs fixed point: central gradients plus per-axis
/// dissipation alpha, pseudo-time tau = cfl h / (2 d alpha + delta h),
/// iterated until the residual drops below delta * tol_cell. Periodic fields
/// are solved on their own period; non-periodic fields on a centered box of
/// half-extent s/delta with constant boundary extrapolation (the field must
/// cover it). Throws on non-convergence with the recent residual history.
CellSolution solve_cell(const PotentialField& field, Vec p, double delta,
                        const CellOptions& opt = {});

/// Max-norm of delta * (v_p - v_q) over the grid, divided by |p - q|
/// (0 when p == q). A bounded value uniform in delta is the discrete
/// counterpart of Lipschitz dependence on the momentum.
double check_p_continuity(const PotentialField& field, Vec p, Vec q,
                          double delta, const CellOptions& opt = {});

}  // namespace hjhomog
