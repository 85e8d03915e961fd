#include "hjhomog/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scheme_util.hpp"

namespace hjhomog {

std::vector<double> EvolveOptions::resolved_slices() const {
  std::vector<double> out = slice_times;
  if (out.empty()) {
    for (int i = 0; i <= 10; ++i) out.push_back(t_final * i / 10.0);
  }
  std::sort(out.begin(), out.end());
  if (out.front() < 0.0) throw std::invalid_argument("evolve: negative slice time");
  return out;
}

namespace {

/// Shared forward-Euler LF loop. hf(q2, idx) is the full right-hand side
/// Hamiltonian (including any source term); q_cap is the gradient radius the
/// dissipation was designed for.
template <class HF>
EvolutionResult run_evolution(int dim, double half, double h, double alpha,
                              double q_cap, const InitialData& data,
                              const EvolveOptions& opt, HF&& hf) {
  EvolutionResult res;
  res.grid = Grid::make(dim, h, half);
  res.alpha = alpha;
  res.tau = opt.cfl * h / (2.0 * dim * alpha);
  res.data_name = data.name;

  const Grid& g = res.grid;
  const int n = g.n_axis;
  const std::size_t nn = g.node_count();
  std::vector<double> u(nn), un(nn);
  for (std::size_t i = 0; i < nn; ++i) u[i] = data.g(g.node_coord(i));

  const std::vector<double> slices = opt.resolved_slices();
  std::size_t next_slice = 0;
  double t = 0.0;
  const double t_end = slices.back();
  const double inv2h = 1.0 / (2.0 * h);

  auto record_if_due = [&]() {
    while (next_slice < slices.size() && slices[next_slice] <= t + 1e-12) {
      res.times.push_back(slices[next_slice]);
      res.slices.push_back(u);
      ++next_slice;
    }
  };
  record_if_due();

  const double cap2 = q_cap * q_cap * (1.0 + 1e-9);
  while (t < t_end - 1e-12) {
    const double step = std::min(res.tau, slices[next_slice] - t);
    double q2max = 0.0;
    for (std::size_t idx = 0; idx < nn; ++idx) {
      const int i = static_cast<int>(idx % n);
      const std::size_t row = idx - static_cast<std::size_t>(i);
      const double vl = u[row + std::max(i - 1, 0)];
      const double vr = u[row + std::min(i + 1, n - 1)];
      const double qx = (vr - vl) * inv2h;
      double q2 = qx * qx;
      double lap = vr + vl - 2.0 * u[idx];
      double qy = 0.0;
      if (dim == 2) {
        const int j = static_cast<int>(idx / n);
        const std::size_t col = idx - static_cast<std::size_t>(j) * n;
        const double vd = u[col + static_cast<std::size_t>(std::max(j - 1, 0)) * n];
        const double vu = u[col + static_cast<std::size_t>(std::min(j + 1, n - 1)) * n];
        qy = (vu - vd) * inv2h;
        q2 += qy * qy;
        lap += vu + vd - 2.0 * u[idx];
      }
      q2max = std::max(q2max, q2);
      un[idx] = u[idx] - step * (hf(qx, qy, idx) - alpha * lap * inv2h);
    }
    if (q2max > cap2) {
      throw std::runtime_error(
          "evolve: gradient left the dissipation design range (CFL budget)");
    }
    u.swap(un);
    t += step;
    record_if_due();
  }
  return res;
}

}  // namespace

EvolutionResult solve_oscillatory(const EnsembleSpec& spec, std::uint64_t realization,
                                  double epsilon, const InitialData& data,
                                  const EvolveOptions& opt) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("evolve: epsilon must be positive");
  if (opt.spacing > epsilon / 8.0 + 1e-12) {
    throw std::invalid_argument("evolve: grid must resolve the oscillation (h <= eps/8)");
  }
  const double vbar = spec.true_sup();
  const double q_cap = scheme::gradient_radius(data.lip, vbar);
  const double alpha = scheme::lf_alpha(q_cap);
  const double h = opt.spacing;
  const double t_end = opt.resolved_slices().back();
  const double half =
      std::ceil((opt.inner_radius + t_end * alpha + opt.margin) / h) * h;

  // The stretched field x -> V(x/eps) is sampled on the matching lattice, so
  // node i of the solve grid reads node i of the field grid exactly.
  const Grid fg = Grid::make(spec.dim, h / epsilon, half / epsilon);
  const PotentialField field = sample_potential(spec, fg, realization);

  EvolutionResult res = run_evolution(
      spec.dim, half, h, alpha, q_cap, data, opt,
      [&](double qx, double qy, std::size_t idx) {
        return scheme::hamiltonian(qx * qx + qy * qy) - field.values[idx];
      });
  res.epsilon = epsilon;
  return res;
}

EvolutionResult solve_homogenized(const EffectiveHamiltonian& table,
                                  const InitialData& data, const EvolveOptions& opt) {
  const double alpha = std::max(1.05 * table.slope_bound(), 1e-6);
  const double q_cap = table.pgrid.p_max;
  if (data.lip > q_cap + 1e-12) {
    throw std::invalid_argument("evolve: initial data steeper than the table range");
  }
  const double h = opt.spacing;
  const double t_end = opt.resolved_slices().back();
  const double half =
      std::ceil((opt.inner_radius + t_end * alpha + opt.margin) / h) * h;

  EvolutionResult res = run_evolution(
      table.pgrid.dim, half, h, alpha, q_cap, data, opt,
      [&](double qx, double qy, std::size_t) {
        return table.value_interp({qx, qy});
      });
  res.epsilon = 0.0;
  return res;
}

namespace {

void require_comparable(const EvolutionResult& a, const EvolutionResult& b) {
  const bool grids_match = a.grid.dim == b.grid.dim &&
                           a.grid.n_axis == b.grid.n_axis &&
                           std::abs(a.grid.spacing - b.grid.spacing) < 1e-12 &&
                           std::abs(a.grid.half_extent - b.grid.half_extent) < 1e-12;
  if (!grids_match) throw std::invalid_argument("compare: grids differ");
  if (a.times.size() != b.times.size())
    throw std::invalid_argument("compare: slice times differ");
  for (std::size_t s = 0; s < a.times.size(); ++s) {
    if (std::abs(a.times[s] - b.times[s]) > 1e-9)
      throw std::invalid_argument("compare: slice times differ");
  }
}

}  // namespace

double compare_sup(const EvolutionResult& a, const EvolutionResult& b, double k) {
  require_comparable(a, b);
  double worst = 0.0;
  const std::size_t nn = a.grid.node_count();
  for (std::size_t s = 0; s < a.times.size(); ++s) {
    if (a.times[s] > k + 1e-12) continue;
    for (std::size_t i = 0; i < nn; ++i) {
      const Vec x = a.grid.node_coord(i);
      if (norm(x, a.grid.dim) > k + 1e-12) continue;
      worst = std::max(worst, std::abs(a.slices[s][i] - b.slices[s][i]));
    }
  }
  return worst;
}

double sup_error_vs_plane(const EvolutionResult& r, const Vec& p,
                          double hbar_value, double k) {
  double worst = 0.0;
  const std::size_t nn = r.grid.node_count();
  for (std::size_t s = 0; s < r.times.size(); ++s) {
    if (r.times[s] > k + 1e-12) continue;
    for (std::size_t i = 0; i < nn; ++i) {
      const Vec x = r.grid.node_coord(i);
      if (norm(x, r.grid.dim) > k + 1e-12) continue;
      const double ref = dot(p, x, r.grid.dim) - r.times[s] * hbar_value;
      worst = std::max(worst, std::abs(r.slices[s][i] - ref));
    }
  }
  return worst;
}

}  // namespace hjhomog
