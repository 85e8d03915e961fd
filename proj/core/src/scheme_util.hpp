#pragma once

#include <algorithm>
#include <cmath>

namespace hjhomog::scheme {

/// H(q) = (|q|^2 - 1)^2 as a function of |q|^2.
inline double hamiltonian(double q2) {
  const double s = q2 - 1.0;
  return s * s;
}

/// Upper bound (with 5% headroom) on |dH/dq_i| over the ball |q| <= Q: the
/// max of the outer rim 4 Q (Q^2 - 1) and the interior well max
/// 4 max_{|q|<1} |q| (1 - |q|^2) = 8 / (3 sqrt 3).
inline double lf_alpha(double Q) {
  const double q2 = Q * Q;
  const double outer = Q * std::max(q2 - 1.0, 0.0);
  const double inner = 2.0 / (3.0 * std::sqrt(3.0));
  return 4.0 * 1.05 * std::max(outer, inner);
}

/// A priori gradient radius: the solution's gradient stays on the sublevel
/// set H(q) <= H(L^2) + vrange when the data is L-Lipschitz and the source
/// term ranges over [0, vrange].
inline double gradient_radius(double data_lip, double vrange) {
  return std::sqrt(1.0 + std::sqrt(hamiltonian(data_lip * data_lip) + vrange));
}

}  // namespace hjhomog::scheme
