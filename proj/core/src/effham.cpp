#include "hjhomog/effham.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace hjhomog {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EffConstants EffConstants::from_vbar(double vbar) {
  if (!(vbar >= 0.0)) throw std::invalid_argument("effham: vbar must be >= 0");
  EffConstants c;
  c.vbar = vbar;
  c.kappa = 1.0 - vbar;
  if (c.kappa >= 0.0) {
    c.mu_star = c.kappa;
    c.sigma_star = -1.0;
  } else {
    c.mu_star = 0.0;
    c.sigma_star = -1.0 / std::sqrt(vbar);
  }
  return c;
}

const char* to_string(Region r) {
  switch (r) {
    case Region::K1: return "K1";
    case Region::K2: return "K2";
    case Region::K3: return "K3";
    case Region::K4: return "K4";
  }
  return "?";
}

double support_gap(const ShapeFunction& shape, const Vec& p) {
  if (shape.status == MetricStatus::NegInfinity) return -kInf;
  double gap = kInf;
  for (std::size_t d = 0; d < shape.directions.size(); ++d) {
    gap = std::min(gap, shape.values[d] - dot(p, shape.directions[d], 2));
  }
  return gap;
}

namespace {

long mu_lattice_max(double vbar) {
  const double kappa = 1.0 - vbar;
  return kappa >= 0.0
             ? static_cast<long>(std::floor(kappa / ShapeProvider::mu_step + 1e-9))
             : -1;
}

}  // namespace

double hbar_minus(const Vec& p, ShapeProvider& shapes) {
  const long j_max = mu_lattice_max(shapes.vbar());
  if (j_max < 0) return -kInf;
  auto gap = [&](long j) { return support_gap(shapes.at(j, -100), p); };
  if (gap(0) < 0.0) return -kInf;
  if (gap(j_max) >= 0.0) return j_max * ShapeProvider::mu_step;
  // Largest j with gap >= 0; the gap decreases in mu.
  long lo = 0, hi = j_max;
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (gap(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo * ShapeProvider::mu_step;
}

double hbar_plus(const Vec& p, ShapeProvider& shapes) {
  auto gap = [&](long j) { return support_gap(shapes.at(j, 100), p); };
  if (gap(0) >= 0.0) return 0.0;
  const double p2 = dot(p, p, 2);
  const double bracket = (p2 - 1.0) * (p2 - 1.0) + shapes.vbar() + 1.0;
  const long j_hi = static_cast<long>(std::ceil(bracket / ShapeProvider::mu_step));
  if (gap(j_hi) < 0.0) {
    throw std::runtime_error(
        "hbar_plus: gap still negative at the bracket; the shape estimates "
        "undershoot");
  }
  // Smallest j with gap >= 0; the gap increases in mu.
  long lo = 0, hi = j_hi;
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (gap(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi * ShapeProvider::mu_step;
}

namespace {

/// The parameter path after its start point, as lattice pairs
/// (mu_idx, sigma_idx): down the sigma = -1 leg, across the mu = 0 leg, up
/// the sigma = +1 leg (capped by the same bracket as hbar_plus).
struct ParamPath {
  long len1 = 0;       // points on (mu, -1), mu descending to 0
  int k_start = -99;   // first sigma index on the mu = 0 leg
  long len2 = 0;       // points on (0, sigma)
  long len3 = 0;       // points on (mu, +1), mu ascending from mu_step
  long j_star = 0;

  long size() const { return len1 + len2 + len3; }

  std::pair<long, int> point(long t) const {
    if (t < len1) return {j_star - 1 - t, -100};
    t -= len1;
    if (t < len2) return {0, static_cast<int>(k_start + t)};
    t -= len2;
    return {t + 1, 100};
  }
};

ParamPath make_path(const EffConstants& c, const Vec& p) {
  ParamPath path;
  if (c.kappa >= 0.0) {
    path.j_star = static_cast<long>(std::floor(c.kappa / ShapeProvider::mu_step + 1e-9));
    path.len1 = path.j_star;  // j_star - 1, ..., 0: ends at (0,-1)
    // (0,-1) is either leg 1's last point or the start itself, so the mu = 0
    // leg begins one sigma step in.
    path.k_start = -99;
  } else {
    path.k_start =
        static_cast<int>(std::floor(c.sigma_star / ShapeProvider::sigma_step)) + 1;
  }
  path.len2 = 100 - path.k_start + 1;
  const double p2 = dot(p, p, 2);
  const double bracket = (p2 - 1.0) * (p2 - 1.0) + c.vbar + 1.0;
  path.len3 = static_cast<long>(std::ceil(bracket / ShapeProvider::mu_step));
  return path;
}

}  // namespace

HbarValue hbar(const Vec& p, ShapeProvider& shapes) {
  const EffConstants c = EffConstants::from_vbar(shapes.vbar());
  HbarValue out;

  const double hm = hbar_minus(p, shapes);
  out.value = std::isfinite(hm) ? hm : hbar_plus(p, shapes);

  const ParamPath path = make_path(c, p);
  auto gap_at = [&](long t) {
    const auto [j, k] = path.point(t);
    return support_gap(shapes.at(j, k), p);
  };

  // Strictness margin for the hilltop test, from the first post-start shape.
  {
    const auto [j0, k0] = path.point(0);
    const ShapeFunction& s0 = shapes.at(j0, k0);
    const double tol_gap = 2.0 * s0.read_tolerance();
    if (support_gap(s0, p) > tol_gap) {
      out.region = Region::K1;
      out.tangency_mu = c.mu_star;
      out.flagged = std::abs(out.value - c.mu_star) > 2.0 * ShapeProvider::mu_step;
      return out;
    }
  }

  // First nonnegative gap along the path; the gap is nondecreasing, so a
  // bisection over the concatenated index finds it.
  const long end = path.size() - 1;
  if (gap_at(end) < 0.0) {
    out.region = Region::K4;
    out.tangency_mu = kInf;
    out.flagged = true;  // no tangency within the bracket: inconsistent
    return out;
  }
  long t_first;
  if (gap_at(0) >= 0.0) {
    t_first = 0;
  } else {
    long lo = 0, hi = end;  // gap(lo) < 0 <= gap(hi)
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (gap_at(mid) >= 0.0 ? hi : lo) = mid;
    }
    t_first = hi;
  }

  const auto [j_t, k_t] = path.point(t_first);
  if (k_t == 100 && j_t > 0) {
    out.region = Region::K4;
  } else if (j_t == 0) {
    out.region = Region::K3;
  } else {
    out.region = Region::K2;
  }
  out.tangency_mu = j_t * ShapeProvider::mu_step;
  out.flagged = std::abs(out.tangency_mu - out.value) > 2.0 * ShapeProvider::mu_step;
  return out;
}

std::size_t PGrid::count() const {
  const std::size_t n = static_cast<std::size_t>(n_axis);
  return dim == 2 ? n * n : n;
}

Vec PGrid::node(std::size_t idx) const {
  const double dp = step();
  const int i = static_cast<int>(idx % n_axis);
  Vec p{-p_max + i * dp, 0.0};
  if (dim == 2) {
    const int j = static_cast<int>(idx / n_axis);
    p[1] = -p_max + j * dp;
  }
  return p;
}

double EffectiveHamiltonian::value_interp(const Vec& p) const {
  const double dp = pgrid.step();
  if (dp == 0.0) return values.empty() ? 0.0 : values.front();
  auto locate = [&](double x, int& i0, double& frac) {
    double t = (x + pgrid.p_max) / dp;
    t = std::clamp(t, 0.0, double(pgrid.n_axis - 1));
    i0 = std::min(static_cast<int>(std::floor(t)), pgrid.n_axis - 2);
    frac = t - i0;
  };
  int i0;
  double tx;
  locate(p[0], i0, tx);
  if (pgrid.dim == 1) {
    return (1.0 - tx) * values[i0] + tx * values[i0 + 1];
  }
  int j0;
  double ty;
  locate(p[1], j0, ty);
  auto at = [&](int i, int j) {
    return values[static_cast<std::size_t>(j) * pgrid.n_axis + i];
  };
  return (1.0 - ty) * ((1.0 - tx) * at(i0, j0) + tx * at(i0 + 1, j0)) +
         ty * ((1.0 - tx) * at(i0, j0 + 1) + tx * at(i0 + 1, j0 + 1));
}

double EffectiveHamiltonian::slope_bound() const {
  const double dp = pgrid.step();
  if (dp == 0.0) return 0.0;
  double s = 0.0;
  const int n = pgrid.n_axis;
  const int rows = pgrid.dim == 2 ? n : 1;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const std::size_t a = static_cast<std::size_t>(j) * n + i;
      s = std::max(s, std::abs(values[a + 1] - values[a]) / dp);
    }
  }
  if (pgrid.dim == 2) {
    for (int j = 0; j + 1 < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t a = static_cast<std::size_t>(j) * n + i;
        s = std::max(s, std::abs(values[a + n] - values[a]) / dp);
      }
    }
  }
  return s;
}

EffectiveHamiltonian tabulate(const PGrid& pgrid, ShapeProvider& shapes) {
  EffectiveHamiltonian table;
  table.pgrid = pgrid;
  table.constants = EffConstants::from_vbar(shapes.vbar());
  const std::size_t n = pgrid.count();
  table.nodes.reserve(n);
  table.values.reserve(n);
  table.regions.reserve(n);
  table.tangency_mu.reserve(n);
  table.flagged.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Vec p = pgrid.node(idx);
    const HbarValue hv = hbar(p, shapes);
    table.nodes.push_back(p);
    table.values.push_back(hv.value);
    table.regions.push_back(hv.region);
    table.tangency_mu.push_back(hv.tangency_mu);
    table.flagged.push_back(hv.flagged ? 1 : 0);
  }
  return table;
}

std::vector<Vec> augmented_directions(const PGrid& pgrid, int n_uniform) {
  if (pgrid.dim == 1) return {{1.0, 0.0}, {-1.0, 0.0}};
  std::vector<Vec> dirs;
  std::set<long long> seen;
  auto push = [&](double x, double y) {
    const double r = std::hypot(x, y);
    if (r < 1e-12) return;
    const long long key = std::llround(std::atan2(y / r, x / r) * 1e9);
    if (seen.insert(key).second) dirs.push_back({x / r, y / r});
  };
  for (int k = 0; k < n_uniform; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n_uniform;
    push(std::cos(a), std::sin(a));
  }
  for (std::size_t i = 0; i < pgrid.count(); ++i) {
    const Vec p = pgrid.node(i);
    push(p[0], pgrid.dim == 2 ? p[1] : 0.0);
  }
  return dirs;
}

}  // namespace hjhomog
