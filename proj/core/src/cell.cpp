#include "hjhomog/cell.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "scheme_util.hpp"

namespace hjhomog {

using scheme::hamiltonian;

namespace {

/// Dissipation that dominates |dH/dq_i| over the gradient range the solution
/// can visit: |p + Dv| stays below Q with (Q^2-1)^2 = (|p|^2-1)^2 + vbar by
/// the constant-function bounds.
double dissipation_for(const Vec& p, double vrange) {
  const double plen = std::sqrt(dot(p, p, 2));
  return scheme::lf_alpha(scheme::gradient_radius(plen, vrange));
}

Grid make_cell_grid(const PotentialField& field, double delta,
                    const CellOptions& opt) {
  const double h = opt.spacing > 0.0 ? opt.spacing : field.grid.spacing;
  if (field.grid.periodic) {
    return Grid::make(field.grid.dim, h, field.grid.half_extent, true,
                      field.grid.center);
  }
  const double vbar = field.vbar;
  const double s = opt.s_factor > 0.0 ? opt.s_factor
                                      : 2.0 * (1.0 + std::sqrt(vbar + 1.0));
  const double half = std::ceil(s / delta / h) * h;
  const Grid g = Grid::make(field.grid.dim, h, half, false, field.grid.center);
  if (!field.grid.contains({g.center[0] + half, g.center[1] + half}, 1e-9) ||
      !field.grid.contains({g.center[0] - half, g.center[1] - half}, 1e-9)) {
    throw std::invalid_argument("solve_cell: field does not cover the s/delta box");
  }
  return g;
}

}  // namespace

CellSolution solve_cell(const PotentialField& field, Vec p, double delta,
                        const CellOptions& opt) {
  if (!(delta > 0.0)) throw std::invalid_argument("solve_cell: delta must be positive");
  CellSolution sol;
  sol.p = p;
  sol.delta = delta;
  sol.grid = make_cell_grid(field, delta, opt);
  const Grid& g = sol.grid;
  const int dim = g.dim;
  const int n = g.n_axis;
  const std::size_t nn = g.node_count();
  const double h = g.spacing;

  std::vector<double> V(nn);
  double vmin = 0.0, vmax = 0.0;
  for (std::size_t i = 0; i < nn; ++i) {
    V[i] = field.value_at(g.node_coord(i));
    vmin = i == 0 ? V[i] : std::min(vmin, V[i]);
    vmax = i == 0 ? V[i] : std::max(vmax, V[i]);
  }

  const double p2 = dot(p, p, 2);
  const double hp = hamiltonian(p2);
  sol.alpha = dissipation_for(p, vmax - vmin);
  sol.tau = opt.cfl * h / (2.0 * dim * sol.alpha + delta * h);
  const double tol = delta * opt.tol_factor * (1.0 + hp + field.vbar);

  // Constant-function comparison bounds; start from their midpoint.
  const double lo = -(hp - vmin) / delta;
  const double hi = -(hp - vmax) / delta;
  sol.values.assign(nn, 0.5 * (lo + hi));
  if (opt.warm_start != nullptr && opt.warm_start->values.size() == nn) {
    const double scale = opt.warm_start->delta / delta;
    for (std::size_t i = 0; i < nn; ++i)
      sol.values[i] = opt.warm_start->values[i] * scale;
  }

  std::vector<double> next(nn);
  std::vector<double> tail;  // recent residuals for the failure report

  auto neighbor = [&](int i, int d) {
    if (g.periodic) return (i + d + n) % n;
    return std::clamp(i + d, 0, n - 1);
  };

  const double inv2h = 1.0 / (2.0 * h);
  for (long sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double res_max = 0.0, res_sum = 0.0;
    const std::vector<double>& v = sol.values;
    for (std::size_t idx = 0; idx < nn; ++idx) {
      const int i = static_cast<int>(idx % n);
      const double vl = v[idx - i + neighbor(i, -1)];
      const double vr = v[idx - i + neighbor(i, +1)];
      double qx = p[0] + (vr - vl) * inv2h;
      double lap = vr + vl - 2.0 * v[idx];
      double q2 = qx * qx;
      if (dim == 2) {
        const int j = static_cast<int>(idx / n);
        const std::size_t col = idx - static_cast<std::size_t>(j) * n;
        const double vd = v[col + static_cast<std::size_t>(neighbor(j, -1)) * n];
        const double vu = v[col + static_cast<std::size_t>(neighbor(j, +1)) * n];
        const double qy = p[1] + (vu - vd) * inv2h;
        q2 += qy * qy;
        lap += vu + vd - 2.0 * v[idx];
      }
      const double res =
          delta * v[idx] + hamiltonian(q2) - sol.alpha * lap * inv2h - V[idx];
      next[idx] = v[idx] - sol.tau * res;
      res_max = std::max(res_max, std::abs(res));
      res_sum += res;
    }
    if (opt.mean_correction) {
      const double shift = res_sum / (double(nn) * delta);
      for (double& x : next) x -= shift;
    }
    sol.values.swap(next);
    sol.residual = res_max;
    sol.iterations = sweep + 1;
    if (res_max <= tol) break;
    if (tail.size() < 8) tail.push_back(res_max);
    else tail[static_cast<std::size_t>(sweep) % 8] = res_max;
  }

  if (sol.residual > tol) {
    std::ostringstream msg;
    msg << "solve_cell: no convergence after " << sol.iterations
        << " sweeps; recent residuals:";
    for (double r : tail) msg << ' ' << r;
    throw std::runtime_error(msg.str());
  }

  sol.minus_delta_v0 = -delta * grid_interp(g, sol.values, g.center);
  for (std::size_t idx = 0; idx < nn; ++idx) {
    const int i = static_cast<int>(idx % n);
    const double vr = sol.values[idx - i + neighbor(i, +1)];
    sol.max_grad = std::max(sol.max_grad, std::abs(vr - sol.values[idx]) / h);
    if (dim == 2) {
      const int j = static_cast<int>(idx / n);
      const std::size_t col = idx - static_cast<std::size_t>(j) * n;
      const double vu = sol.values[col + static_cast<std::size_t>(neighbor(j, +1)) * n];
      sol.max_grad = std::max(sol.max_grad, std::abs(vu - sol.values[idx]) / h);
    }
  }
  return sol;
}

double check_p_continuity(const PotentialField& field, Vec p, Vec q,
                          double delta, const CellOptions& opt) {
  const double dpq = norm({p[0] - q[0], p[1] - q[1]}, field.grid.dim);
  if (dpq == 0.0) return 0.0;
  const CellSolution a = solve_cell(field, p, delta, opt);
  const CellSolution b = solve_cell(field, q, delta, opt);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  }
  return delta * worst / dpq;
}

}  // namespace hjhomog
