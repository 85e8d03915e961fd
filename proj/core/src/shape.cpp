#include "hjhomog/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hjhomog {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<Vec> ShapeOptions::resolved_directions(int dim) const {
  if (!directions.empty()) {
    std::vector<Vec> out = directions;
    for (Vec& e : out) {
      const double n = norm(e, dim);
      if (!(n > 0.0)) throw std::invalid_argument("shape: zero direction");
      e[0] /= n;
      if (dim == 2) e[1] /= n; else e[1] = 0.0;
    }
    return out;
  }
  if (dim == 1) return {Vec{1.0, 0.0}, Vec{-1.0, 0.0}};
  const int n = n_dir > 0 ? n_dir : 32;
  std::vector<Vec> out(n);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    out[k] = {std::cos(th), std::sin(th)};
  }
  return out;
}

std::vector<double> ShapeOptions::resolved_radii(const EnsembleSpec& spec) const {
  std::vector<double> out = radii;
  if (out.empty()) {
    const double L = spec.correlation_length();
    out = spec.dim == 1 ? std::vector<double>{25 * L, 50 * L, 100 * L}
                        : std::vector<double>{2 * L, 4 * L, 8 * L};
  }
  std::sort(out.begin(), out.end());
  if (!(out.front() > 0.0)) throw std::invalid_argument("shape: radii must be positive");
  return out;
}

int ShapeOptions::resolved_realizations(const EnsembleSpec& spec) const {
  if (realizations > 0) return realizations;
  return spec.kind == EnsembleKind::PoissonBumps ? 8 : 1;
}

namespace {

bool directions_are_1d(const std::vector<Vec>& dirs) {
  return std::all_of(dirs.begin(), dirs.end(),
                     [](const Vec& e) { return e[1] == 0.0; });
}

}  // namespace

double ShapeFunction::value_at(const Vec& e) const {
  const int dim = directions_are_1d(directions) ? 1 : 2;
  const double len = norm(e, 2);
  if (!(len > 0.0)) return 0.0;
  if (dim == 1) {
    const double want = e[0] > 0.0 ? 1.0 : -1.0;
    for (std::size_t d = 0; d < directions.size(); ++d) {
      if (directions[d][0] * want > 0.0) return len * values[d];
    }
    throw std::logic_error("shape: missing 1D direction");
  }
  // Piecewise-linear in angle between the nearest stored directions on
  // either side.
  const double phi = std::atan2(e[1], e[0]);
  double best_ccw = kInf, best_cw = kInf;
  std::size_t i_ccw = 0, i_cw = 0;
  for (std::size_t d = 0; d < directions.size(); ++d) {
    double dth = std::atan2(directions[d][1], directions[d][0]) - phi;
    dth = std::remainder(dth, 2.0 * std::numbers::pi);
    const double fwd = dth >= 0.0 ? dth : dth + 2.0 * std::numbers::pi;
    const double bwd = 2.0 * std::numbers::pi - fwd;
    if (fwd < best_ccw) { best_ccw = fwd; i_ccw = d; }
    if (bwd < best_cw) { best_cw = bwd; i_cw = d; }
  }
  if (best_ccw < 1e-12 || best_cw < 1e-12 || i_ccw == i_cw) {
    return len * values[best_ccw <= best_cw ? i_ccw : i_cw];
  }
  const double w = best_cw / (best_ccw + best_cw);
  return len * (w * values[i_ccw] + (1.0 - w) * values[i_cw]);
}

double ShapeFunction::read_tolerance() const {
  double se = 0.0, vmax = 0.0;
  for (double s : stderrs) se = std::max(se, s);
  for (double v : values) {
    if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
  }
  if (directions_are_1d(directions)) {
    return se;  // 1D reads are exact in direction
  }
  // Largest angular gap between adjacent stored directions.
  std::vector<double> ang(directions.size());
  for (std::size_t d = 0; d < directions.size(); ++d) {
    ang[d] = std::atan2(directions[d][1], directions[d][0]);
  }
  std::sort(ang.begin(), ang.end());
  double gap = 2.0 * std::numbers::pi - (ang.back() - ang.front());
  for (std::size_t d = 1; d < ang.size(); ++d) gap = std::max(gap, ang[d] - ang[d - 1]);
  // Chord-vs-arc curvature bound for a convex positively homogeneous
  // function: error of linear-in-angle interpolation is O(gap^2) * scale.
  return se + 0.125 * gap * gap * vmax;
}

ShapeFunction estimate_shape_from_fields(const std::vector<PotentialField>& fields,
                                         double vbar_admissibility, ParamPair prm,
                                         const std::vector<Vec>& directions,
                                         const std::vector<double>& radii,
                                         const ShapeOptions& opt) {
  if (fields.empty()) throw std::invalid_argument("shape: no fields");
  const int dim = fields.front().grid.dim;
  const std::size_t nd = directions.size();
  const std::size_t nr = radii.size();

  ShapeFunction sf;
  sf.params = prm;
  sf.directions = directions;
  sf.radii = radii;
  sf.vbar = vbar_admissibility;

  if (!prm.admissible(vbar_admissibility)) {
    sf.status = MetricStatus::NegInfinity;
    sf.values.assign(nd, -kInf);
    sf.stderrs.assign(nd, 0.0);
    sf.ladder.assign(nr, std::vector<double>(nd, -kInf));
    return sf;
  }

  MetricOptions mo;
  mo.target_radius = radii.back();
  mo.box_factor = opt.box_factor;
  mo.spacing = opt.spacing;
  mo.init_cap_frac = opt.init_cap_frac;

  const std::size_t nreal = fields.size();
  // top[d][r]: largest-radius rescaled read per realization, for dispersion.
  std::vector<std::vector<double>> top(nd, std::vector<double>(nreal, 0.0));
  sf.ladder.assign(nr, std::vector<double>(nd, 0.0));

  for (std::size_t r = 0; r < nreal; ++r) {
    const MetricField m = solve_metric(fields[r], prm, fields[r].grid.center, mo);
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t i = 0; i < nr; ++i) {
        Vec y = fields[r].grid.center;
        y[0] += radii[i] * directions[d][0];
        if (dim == 2) y[1] += radii[i] * directions[d][1];
        const double v = m.value_at(y) / radii[i];
        sf.ladder[i][d] += v / nreal;
        if (i + 1 == nr) top[d][r] = v;
      }
    }
  }

  sf.values = sf.ladder.back();
  sf.stderrs.assign(nd, 0.0);
  if (nreal > 1) {
    for (std::size_t d = 0; d < nd; ++d) {
      double mean = 0.0;
      for (double v : top[d]) mean += v / nreal;
      double ss = 0.0;
      for (double v : top[d]) ss += (v - mean) * (v - mean);
      sf.stderrs[d] = std::sqrt(ss / (nreal - 1)) / std::sqrt(double(nreal));
    }
  }

  if (opt.richardson && nr >= 2) {
    // Two-point fit of m + c/R on the top rungs. Can overshoot below the true
    // limit for subadditive data, hence off by default.
    const double r1 = radii[nr - 2], r2 = radii[nr - 1];
    for (std::size_t d = 0; d < nd; ++d) {
      sf.values[d] = (r2 * sf.ladder[nr - 1][d] - r1 * sf.ladder[nr - 2][d]) / (r2 - r1);
    }
  }
  return sf;
}

ShapeFunction estimate_shape(const EnsembleSpec& spec, ParamPair prm,
                             const ShapeOptions& opt) {
  spec.validate();
  const std::vector<Vec> dirs = opt.resolved_directions(spec.dim);
  const std::vector<double> radii = opt.resolved_radii(spec);
  const int nreal = opt.resolved_realizations(spec);

  const double h = opt.spacing;
  const double half = std::ceil(opt.box_factor * radii.back() / h - 1e-9) * h;
  const Grid g = Grid::make(spec.dim, h, half);
  std::vector<PotentialField> fields;
  fields.reserve(nreal);
  for (int r = 0; r < nreal; ++r) {
    fields.push_back(sample_potential(spec, g, opt.realization_offset + r));
  }
  return estimate_shape_from_fields(fields, spec.true_sup(), prm, dirs, radii, opt);
}

ShapeMonotonicityReport check_shape_monotonicity(const std::vector<ShapeFunction>& shapes) {
  ShapeMonotonicityReport rep;
  rep.min_strict_gap = kInf;
  for (std::size_t a = 0; a < shapes.size(); ++a) {
    for (std::size_t b = a + 1; b < shapes.size(); ++b) {
      const ShapeFunction& sa = shapes[a];
      const ShapeFunction& sb = shapes[b];
      if (sa.directions.size() != sb.directions.size())
        throw std::invalid_argument("shape monotonicity: direction sets differ");
      for (std::size_t d = 0; d < sa.directions.size(); ++d) {
        if (std::abs(sa.directions[d][0] - sb.directions[d][0]) > 1e-12 ||
            std::abs(sa.directions[d][1] - sb.directions[d][1]) > 1e-12)
          throw std::invalid_argument("shape monotonicity: direction sets differ");
      }

      const bool same_mu = std::abs(sa.params.mu - sb.params.mu) < 1e-15;
      const bool same_sigma = std::abs(sa.params.sigma - sb.params.sigma) < 1e-15;
      const ShapeFunction* lo = nullptr;
      const ShapeFunction* hi = nullptr;
      if (same_mu && !same_sigma) {
        lo = sa.params.sigma < sb.params.sigma ? &sa : &sb;
        hi = lo == &sa ? &sb : &sa;
      } else if (same_sigma && !same_mu) {
        const double pa = sa.params.sigma * sa.params.mu;
        const double pb = sb.params.sigma * sb.params.mu;
        if (pa == pb) continue;  // sigma == 0: no ordering claim
        lo = pa < pb ? &sa : &sb;
        hi = lo == &sa ? &sb : &sa;
      } else {
        continue;
      }

      ++rep.comparisons;
      double& viol = same_mu ? rep.max_sigma_violation : rep.max_sigma_mu_violation;
      double gap = kInf;
      for (std::size_t d = 0; d < lo->values.size(); ++d) {
        viol = std::max(viol, lo->values[d] - hi->values[d]);
        gap = std::min(gap, hi->values[d] - lo->values[d]);
      }
      rep.min_strict_gap = std::min(rep.min_strict_gap, gap);
    }
  }
  if (rep.comparisons == 0) rep.min_strict_gap = 0.0;
  return rep;
}

ShapeProvider::ShapeProvider(const EnsembleSpec& spec, ShapeOptions opt)
    : spec_(spec), opt_(std::move(opt)) {
  spec_.validate();
  directions_ = opt_.resolved_directions(spec_.dim);
  radii_ = opt_.resolved_radii(spec_);
  vbar_ = spec_.true_sup();
  const int nreal = opt_.resolved_realizations(spec_);
  const double h = opt_.spacing;
  const double half = std::ceil(opt_.box_factor * radii_.back() / h - 1e-9) * h;
  const Grid g = Grid::make(spec_.dim, h, half);
  fields_.reserve(nreal);
  for (int r = 0; r < nreal; ++r) {
    fields_.push_back(sample_potential(spec_, g, opt_.realization_offset + r));
  }
}

const ShapeFunction& ShapeProvider::at(long mu_idx, int sigma_idx) {
  const auto key = std::make_pair(mu_idx, sigma_idx);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const ParamPair prm{mu_idx * mu_step, sigma_idx * sigma_step};
  ShapeFunction sf =
      estimate_shape_from_fields(fields_, vbar_, prm, directions_, radii_, opt_);
  if (sf.status == MetricStatus::Finite) solves_ += static_cast<long>(fields_.size());
  return cache_.emplace(key, std::move(sf)).first->second;
}

}  // namespace hjhomog
