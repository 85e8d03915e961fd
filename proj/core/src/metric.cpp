#include "hjhomog/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

#include "hjhomog/rng.hpp"

namespace hjhomog {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool ParamPair::admissible(double vbar) const {
  return sigma * std::sqrt(std::max(0.0, mu + vbar)) >= -1.0 - 1e-12;
}

double speed_squared(const PotentialField& field, ParamPair prm, const Vec& x) {
  return 1.0 + prm.sigma * std::sqrt(std::max(0.0, prm.mu + field.value_at(x)));
}

double MetricField::value_at(const Vec& y) const {
  return grid_interp(grid, values, y);
}

namespace {

Grid make_solve_grid(const PotentialField& field, Vec source,
                     const MetricOptions& opt) {
  const double h = opt.spacing > 0.0 ? opt.spacing : field.grid.spacing;
  if (!(opt.target_radius > 0.0))
    throw std::invalid_argument("solve_metric: target_radius must be positive");
  if (!(opt.box_factor >= 1.0))
    throw std::invalid_argument("solve_metric: box_factor must be >= 1");
  // Round the half extent up to a whole number of spacings so the source
  // sits exactly on the center node.
  const double want = opt.box_factor * opt.target_radius;
  const double half = std::ceil(want / h - 1e-9) * h;
  return Grid::make(field.grid.dim, h, half, false, source);
}

double local_speed(const PotentialField& field, ParamPair prm, const Vec& x,
                   double floor_eps, long& degenerate) {
  const double s2 = speed_squared(field, prm, x);
  if (s2 < floor_eps) {
    ++degenerate;
    return 0.0;
  }
  return std::sqrt(s2);
}

void solve_metric_1d(const PotentialField& field, ParamPair prm,
                     const MetricOptions& opt, MetricField& out) {
  const Grid& g = out.grid;
  const int n = g.n_axis;
  const int src = (n - 1) / 2;
  const double h = g.spacing;

  // Cumulative Simpson with 8 panels per grid interval. The 1D distance is
  // the exact line integral of the speed, so quadrature is the whole solve.
  auto panel_integral = [&](int i) {
    const double x0 = g.axis_coord(i, 0);
    const double w = h / 8.0;
    double fs[9];
    for (int k = 0; k <= 8; ++k) {
      long dummy = 0;
      fs[k] = local_speed(field, prm, Vec{x0 + k * w, 0.0}, opt.degenerate_floor, dummy);
    }
    return (w / 3.0) * (fs[0] + 4.0 * (fs[1] + fs[3] + fs[5] + fs[7]) +
                        2.0 * (fs[2] + fs[4] + fs[6]) + fs[8]);
  };

  out.values.assign(g.node_count(), 0.0);
  for (int i = src; i + 1 < n; ++i) {
    out.values[g.index(i + 1)] = out.values[g.index(i)] + panel_integral(i);
  }
  for (int i = src; i - 1 >= 0; --i) {
    out.values[g.index(i - 1)] = out.values[g.index(i)] + panel_integral(i - 1);
  }

  long degenerate = 0;
  for (int i = 0; i < n; ++i) {
    long d = 0;
    local_speed(field, prm, Vec{g.axis_coord(i, 0), 0.0}, opt.degenerate_floor, d);
    degenerate += d;
  }
  out.degenerate_nodes = degenerate;
}

/// Upwind update at a node with per-axis best accepted neighbor values a, b
/// and local cost step fh = f*h. Falls back to the one-sided update when the
/// two-sided root would violate causality.
double fmm_update(double a, double b, double fh) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (!(lo < kInf)) return kInf;
  if (!(hi < kInf) || hi - lo >= fh) return lo + fh;
  const double d = hi - lo;
  return 0.5 * (a + b + std::sqrt(2.0 * fh * fh - d * d));
}

void solve_metric_2d(const PotentialField& field, ParamPair prm,
                     const MetricOptions& opt, MetricField& out) {
  const Grid& g = out.grid;
  const int n = g.n_axis;
  const std::size_t nn = g.node_count();
  const double h = g.spacing;
  const int ci = (n - 1) / 2;

  std::vector<double> f(nn);
  long degenerate = 0;
  for (std::size_t idx = 0; idx < nn; ++idx) {
    f[idx] = local_speed(field, prm, g.node_coord(idx), opt.degenerate_floor, degenerate);
  }
  out.degenerate_nodes = degenerate;

  std::vector<double> val(nn, kInf);
  std::vector<std::uint8_t> accepted(nn, 0);

  // Seed a disk around the source from the local speed rather than the bare
  // point: the point singularity otherwise costs a full order of accuracy.
  // The disk grows while the potential stays constant inside it (up to the
  // cap), which makes constant-speed solves exact along the axes and keeps
  // the log-factor error of diagonal marching small. Scanning the potential
  // rather than the speed keeps the disk identical for every (mu, sigma) on
  // one field, so solves that share a field stay node-wise ordered; a
  // speed-based scan would size the disk differently per parameter pair.
  const double cap = std::min(opt.init_cap_frac * opt.target_radius,
                              g.half_extent - 2.0 * h);
  const double fsrc = f[g.index(ci, ci)];
  double r_init = std::max(h, std::min(3.0 * h, cap));
  if (opt.init_radius > 0.0) {
    r_init = std::max(h, std::min(opt.init_radius, cap));
  } else {
    const int reach = static_cast<int>(std::floor(cap / h)) + 1;
    std::vector<std::pair<double, double>> by_r;  // (|rel|, V)
    by_r.reserve(static_cast<std::size_t>(4 * reach * reach));
    for (int j = std::max(0, ci - reach); j <= std::min(n - 1, ci + reach); ++j) {
      for (int i = std::max(0, ci - reach); i <= std::min(n - 1, ci + reach); ++i) {
        const double rx = (i - ci) * h;
        const double ry = (j - ci) * h;
        const double r = std::hypot(rx, ry);
        if (r <= cap) by_r.emplace_back(r, field.value_at(g.node_coord(g.index(i, j))));
      }
    }
    std::sort(by_r.begin(), by_r.end());
    const double osc_tol = 1e-9 * std::max(field.vbar, 1e-12);
    double vmin = kInf, vmax = -kInf;
    for (const auto& [r, vv] : by_r) {
      vmin = std::min(vmin, vv);
      vmax = std::max(vmax, vv);
      if (vmax - vmin > osc_tol) break;
      r_init = std::max(r_init, r);
    }
    r_init = std::min(r_init, cap);
  }

  using HeapItem = std::pair<double, int>;
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> heap;

  const int seed_reach = static_cast<int>(std::floor(r_init / h)) + 1;
  for (int j = std::max(0, ci - seed_reach); j <= std::min(n - 1, ci + seed_reach); ++j) {
    for (int i = std::max(0, ci - seed_reach); i <= std::min(n - 1, ci + seed_reach); ++i) {
      const double rx = (i - ci) * h;
      const double ry = (j - ci) * h;
      const double r = std::hypot(rx, ry);
      if (r > r_init) continue;
      const std::size_t idx = g.index(i, j);
      val[idx] = r * 0.5 * (fsrc + f[idx]);
      heap.emplace(val[idx], static_cast<int>(idx));
    }
  }

  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  while (!heap.empty()) {
    const auto [v, idx] = heap.top();
    heap.pop();
    if (accepted[idx]) continue;
    accepted[idx] = 1;
    const int i = static_cast<int>(idx % n);
    const int j = static_cast<int>(idx / n);
    for (int k = 0; k < 4; ++k) {
      const int ni = i + di[k];
      const int nj = j + dj[k];
      if (ni < 0 || ni >= n || nj < 0 || nj >= n) continue;
      const std::size_t nb = g.index(ni, nj);
      if (accepted[nb]) continue;
      // Best accepted neighbor per axis.
      double ax = kInf, ay = kInf;
      if (ni > 0 && accepted[g.index(ni - 1, nj)]) ax = val[g.index(ni - 1, nj)];
      if (ni < n - 1 && accepted[g.index(ni + 1, nj)])
        ax = std::min(ax, val[g.index(ni + 1, nj)]);
      if (nj > 0 && accepted[g.index(ni, nj - 1)]) ay = val[g.index(ni, nj - 1)];
      if (nj < n - 1 && accepted[g.index(ni, nj + 1)])
        ay = std::min(ay, val[g.index(ni, nj + 1)]);
      const double cand = fmm_update(ax, ay, f[nb] * h);
      if (cand < val[nb]) {
        val[nb] = cand;
        heap.emplace(cand, static_cast<int>(nb));
      }
    }
  }

  out.values = std::move(val);
}

}  // namespace

MetricField solve_metric(const PotentialField& field, ParamPair prm,
                         Vec source, const MetricOptions& opt) {
  if (prm.mu < 0.0) throw std::invalid_argument("solve_metric: mu must be >= 0");
  MetricField out;
  out.params = prm;
  out.source = source;
  out.trust_radius = opt.target_radius;
  out.grid = make_solve_grid(field, source, opt);

  if (!prm.admissible(field.vbar)) {
    out.status = MetricStatus::NegInfinity;
    return out;
  }
  out.status = MetricStatus::Finite;

  if (out.grid.dim == 1) {
    solve_metric_1d(field, prm, opt, out);
  } else {
    solve_metric_2d(field, prm, opt, out);
  }
  return out;
}

SubsolutionReport check_subsolution_properties(const PotentialField& field,
                                               ParamPair prm,
                                               const MetricOptions& opt,
                                               int n_sources, int n_triples,
                                               std::uint64_t seed,
                                               double snap_spacing) {
  SubsolutionReport rep;
  if (!prm.admissible(field.vbar)) return rep;

  const Vec z0 = field.grid.center;
  std::vector<MetricField> solves;
  solves.push_back(solve_metric(field, prm, z0, opt));
  const Grid bg = solves[0].grid;  // copy: the vector reallocates below

  RngStream rs(seed, "subsol-check");
  const double rball = 0.4 * opt.target_radius;
  for (int s = 0; s < n_sources; ++s) {
    Vec x = z0;
    x[0] += rs.uniform(-rball, rball);
    if (bg.dim == 2) x[1] += rs.uniform(-rball, rball);
    if (snap_spacing > 0.0) {
      for (int a = 0; a < bg.dim; ++a)
        x[a] = z0[a] + std::round((x[a] - z0[a]) / snap_spacing) * snap_spacing;
    } else {
      x = bg.node_coord(bg.nearest_node(x));  // representable source
    }
    solves.push_back(solve_metric(field, prm, x, opt));
  }

  for (std::size_t a = 0; a < solves.size(); ++a) {
    for (std::size_t b = a + 1; b < solves.size(); ++b) {
      const double mab = solves[a].value_at(solves[b].source);
      const double mba = solves[b].value_at(solves[a].source);
      rep.max_symmetry_defect = std::max(rep.max_symmetry_defect, std::abs(mab - mba));
      ++rep.pairs;
    }
  }

  for (int t = 0; t < n_triples; ++t) {
    Vec y = z0;
    y[0] += rs.uniform(-0.45 * opt.target_radius, 0.45 * opt.target_radius);
    if (bg.dim == 2) y[1] += rs.uniform(-0.45 * opt.target_radius, 0.45 * opt.target_radius);
    const std::size_t a = static_cast<std::size_t>(rs.next_u64() % solves.size());
    std::size_t b = static_cast<std::size_t>(rs.next_u64() % solves.size());
    if (b == a) b = (b + 1) % solves.size();
    // m(y, z_b) <= m(y, z_a) + m(z_a, z_b)
    const double lhs = solves[b].value_at(y);
    const double rhs = solves[a].value_at(y) + solves[b].value_at(solves[a].source);
    rep.max_subadd_defect = std::max(rep.max_subadd_defect, lhs - rhs);
    ++rep.triples;
  }

  // Cone bounds from the extreme speeds: the distance of the base solve must
  // sit between the min-speed and max-speed cones.
  const double vb = field.vbar;
  const double s_at_mu = 1.0 + prm.sigma * std::sqrt(std::max(0.0, prm.mu));
  const double s_at_mubar = 1.0 + prm.sigma * std::sqrt(std::max(0.0, prm.mu + vb));
  const double fmin = std::sqrt(std::max(0.0, std::min(s_at_mu, s_at_mubar)));
  const double fmax = std::sqrt(std::max(0.0, std::max(s_at_mu, s_at_mubar)));
  const std::size_t nn = bg.node_count();
  for (std::size_t idx = 0; idx < nn; ++idx) {
    const Vec y = bg.node_coord(idx);
    Vec rel{y[0] - z0[0], bg.dim == 2 ? y[1] - z0[1] : 0.0};
    const double r = norm(rel, bg.dim);
    if (r > opt.target_radius) continue;
    const double m = solves[0].values[idx];
    rep.max_cone_lower_violation =
        std::max(rep.max_cone_lower_violation, fmin * r - m);
    rep.max_cone_upper_violation =
        std::max(rep.max_cone_upper_violation, m - fmax * r);
  }
  return rep;
}

}  // namespace hjhomog
