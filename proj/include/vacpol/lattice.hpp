#pragma once

#include <array>
#include <vector>

#include "vacpol/types.hpp"

namespace vacpol {

/// Periodic-box momentum discretization of the cutoff one-particle space.
/// Modes are k = (2 pi / L) n with n in Z^3, |n_i| <= N and |k| <= Lambda,
/// ordered lexicographically in n. The spinor basis dimension is
/// 4 * mode_count(). The set is symmetric under k -> -k and contains k = 0.
class MomentumLattice {
 public:
  MomentumLattice(Real box_length, int max_index, Real cutoff);

  Real box_length() const { return L_; }
  int max_index() const { return N_; }
  Real cutoff() const { return cutoff_; }
  Real volume() const { return L_ * L_ * L_; }
  Real spacing() const { return 2.0 * kPi / L_; }

  int mode_count() const { return static_cast<int>(modes_.size()); }
  int dim() const { return 4 * mode_count(); }

  const std::vector<Vector3i>& modes() const { return modes_; }
  const Vector3i& mode(int a) const { return modes_[a]; }
  Vector3r momentum(int a) const { return spacing() * modes_[a].cast<Real>(); }

  /// Index of integer mode n, or -1 when n is not in the lattice.
  int mode_index(const Vector3i& n) const;
  /// Index of the negated mode; total by symmetry of the mode set.
  int negation_of(int a) const { return mode_index(-modes_[a]); }

  // Difference-momentum grid: the cube |d_i| <= 2N, which holds every
  // difference of two single-particle modes exactly.
  int diff_half() const { return 2 * N_; }
  int diff_size() const { return diff_size_; }
  bool diff_contains(const Vector3i& d) const;
  int diff_index(const Vector3i& d) const;
  Vector3i diff_vector(int idx) const;
  Vector3r diff_momentum(int idx) const { return spacing() * diff_vector(idx).cast<Real>(); }

 private:
  Real L_;
  int N_;
  Real cutoff_;
  std::vector<Vector3i> modes_;
  std::vector<int> mode_lookup_;  // (2N+1)^3 cube -> mode index or -1
  int diff_size_;
};

MomentumLattice build_lattice(Real box_length, int max_index, Real cutoff);

/// Fourier coefficients of a real scalar field on the difference grid of a
/// lattice, convention f_hat(q) = (1/L^3) integral of f(x) exp(-i q x).
/// Reality means coeff at -q equals the conjugate of coeff at q.
struct ChargeDensity {
  Real box_length = 0.0;
  int half = 0;  // coefficients live on the cube |d_i| <= half
  VectorXc coeff;

  static ChargeDensity zero(const MomentumLattice& lat) {
    ChargeDensity rho;
    rho.box_length = lat.box_length();
    rho.half = lat.diff_half();
    rho.coeff = VectorXc::Zero(lat.diff_size());
    return rho;
  }

  int size() const { return static_cast<int>(coeff.size()); }
  bool same_grid(const ChargeDensity& other) const {
    return half == other.half && box_length == other.box_length;
  }

  /// Total charge carried by the field, L^3 times the zero mode.
  Real total_charge(const MomentumLattice& lat) const {
    return (lat.volume() * coeff[lat.diff_index(Vector3i::Zero())]).real();
  }
};

struct CurrentDensity {
  std::array<ChargeDensity, 3> component;

  static CurrentDensity zero(const MomentumLattice& lat) {
    return {{ChargeDensity::zero(lat), ChargeDensity::zero(lat), ChargeDensity::zero(lat)}};
  }
};

/// Largest violation of the reality constraint coeff(-q) = conj(coeff(q)).
Real reality_defect(const ChargeDensity& f, const MomentumLattice& lat);

/// Coulomb inner product of two densities on the box,
///   D(f,g) = 4 pi L^3 sum_{q != 0} conj(f_hat_q) g_hat_q / |q|^2.
/// Positive semi-definite on real densities; the zero mode is excluded
/// (uniform background convention). Returns the real part.
Real coulomb_inner(const ChargeDensity& f, const ChargeDensity& g, const MomentumLattice& lat);

inline Real coulomb_norm(const ChargeDensity& f, const MomentumLattice& lat) {
  return std::sqrt(std::max(0.0, coulomb_inner(f, f, lat)));
}

/// Solve -Lap V = 4 pi rho mode-wise: V_hat_q = 4 pi rho_hat_q / |q|^2 for
/// q != 0, V_hat_0 = 0. With this convention
/// D(f,g) = L^3 sum_q conj(f_hat_q) V_hat_q[g].
ChargeDensity poisson_potential(const ChargeDensity& rho, const MomentumLattice& lat);

// Elementwise arithmetic; grids must match.
ChargeDensity operator+(const ChargeDensity& a, const ChargeDensity& b);
ChargeDensity operator-(const ChargeDensity& a, const ChargeDensity& b);
ChargeDensity operator*(Real s, const ChargeDensity& a);

}  // namespace vacpol
