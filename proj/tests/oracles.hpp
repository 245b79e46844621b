#pragma once

#include <cmath>

#include "vacpol/lattice.hpp"

// Independent oracles used by the unit and acceptance suites. These are
// implemented from first principles with scalar arithmetic only, so they
// share no code path with the library routines they check.

namespace vacpol::testing {

/// Antiderivative of (z^2 - z^4/3)/(1 - z^2): with Z the upper limit
/// r/sqrt(1+r^2), the integral is Z^3/9 - 2Z/3 + (1/3) log((1+Z)/(1-Z)).
/// 1 - Z is evaluated as 1/(s(s+r)) with s = sqrt(1+r^2) to avoid
/// cancellation at large r.
inline Real b_closed_form(Real r) {
  const Real s = std::sqrt(1.0 + r * r);
  const Real z = r / s;
  const Real one_minus_z = 1.0 / (s * (s + r));
  const Real one_plus_z = (s + r) / s;
  return (z * z * z / 9.0 - 2.0 * z / 3.0 + std::log(one_plus_z / one_minus_z) / 3.0) / kPi;
}

/// Second-order perturbation sum for the charge response of the free
/// vacuum at difference momentum q: a direct double loop over the mode
/// pairs (k, k+q) with the free-projector sandwich traces reduced to
///   tr[P+(k') P-(k) + P-(k') P+(k)] = 2 (1 - (k.k' + m^2) / (E E')).
inline Real perturbative_response_oracle(const MomentumLattice& lat, Real m,
                                         const Vector3i& q_index) {
  const Real q2 = (lat.spacing() * q_index.cast<Real>()).squaredNorm();
  Real sum = 0.0;
  for (int a = 0; a < lat.mode_count(); ++a) {
    const Vector3i n = lat.mode(a);
    if (lat.mode_index(n + q_index) < 0) continue;
    const Vector3r k = lat.spacing() * n.cast<Real>();
    const Vector3r kq = lat.spacing() * (n + q_index).cast<Real>();
    const Real e1 = std::sqrt(k.squaredNorm() + m * m);
    const Real e2 = std::sqrt(kq.squaredNorm() + m * m);
    sum += (1.0 - (k.dot(kq) + m * m) / (e1 * e2)) / (e1 + e2);
  }
  return 8.0 * kPi / (lat.volume() * q2) * sum;
}

}  // namespace vacpol::testing
