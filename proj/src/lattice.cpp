#include "vacpol/lattice.hpp"

#include <cassert>
#include <stdexcept>

namespace vacpol {

MomentumLattice::MomentumLattice(Real box_length, int max_index, Real cutoff)
    : L_(box_length), N_(max_index), cutoff_(cutoff) {
  if (L_ <= 0.0) throw std::invalid_argument("box length must be positive");
  if (N_ < 0) throw std::invalid_argument("max index must be non-negative");
  if (cutoff_ <= 0.0) throw std::invalid_argument("cutoff must be positive");

  const Real dk = spacing();
  const int side = 2 * N_ + 1;
  mode_lookup_.assign(static_cast<std::size_t>(side) * side * side, -1);

  for (int n1 = -N_; n1 <= N_; ++n1)
    for (int n2 = -N_; n2 <= N_; ++n2)
      for (int n3 = -N_; n3 <= N_; ++n3) {
        const Vector3i n(n1, n2, n3);
        if (dk * n.cast<Real>().norm() <= cutoff_) {
          const int flat = (n1 + N_) * side * side + (n2 + N_) * side + (n3 + N_);
          mode_lookup_[flat] = static_cast<int>(modes_.size());
          modes_.push_back(n);
        }
      }

  const int dside = 4 * N_ + 1;
  diff_size_ = dside * dside * dside;
}

int MomentumLattice::mode_index(const Vector3i& n) const {
  if (n.cwiseAbs().maxCoeff() > N_) return -1;
  const int side = 2 * N_ + 1;
  const int flat = (n.x() + N_) * side * side + (n.y() + N_) * side + (n.z() + N_);
  return mode_lookup_[flat];
}

bool MomentumLattice::diff_contains(const Vector3i& d) const {
  return d.cwiseAbs().maxCoeff() <= diff_half();
}

int MomentumLattice::diff_index(const Vector3i& d) const {
  assert(diff_contains(d));
  const int h = diff_half();
  const int side = 4 * N_ + 1;
  return (d.x() + h) * side * side + (d.y() + h) * side + (d.z() + h);
}

Vector3i MomentumLattice::diff_vector(int idx) const {
  const int h = diff_half();
  const int side = 4 * N_ + 1;
  const int z = idx % side;
  const int y = (idx / side) % side;
  const int x = idx / (side * side);
  return Vector3i(x - h, y - h, z - h);
}

MomentumLattice build_lattice(Real box_length, int max_index, Real cutoff) {
  return MomentumLattice(box_length, max_index, cutoff);
}

Real reality_defect(const ChargeDensity& f, const MomentumLattice& lat) {
  Real worst = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const int j = lat.diff_index(-lat.diff_vector(i));
    worst = std::max(worst, std::abs(f.coeff[i] - std::conj(f.coeff[j])));
  }
  return worst;
}

Real coulomb_inner(const ChargeDensity& f, const ChargeDensity& g, const MomentumLattice& lat) {
  assert(f.same_grid(g) && f.half == lat.diff_half());
  Complex sum = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const Vector3i d = lat.diff_vector(i);
    if (d == Vector3i::Zero()) continue;
    const Real q2 = lat.diff_momentum(i).squaredNorm();
    sum += std::conj(f.coeff[i]) * g.coeff[i] / q2;
  }
  return (4.0 * kPi * lat.volume() * sum).real();
}

ChargeDensity poisson_potential(const ChargeDensity& rho, const MomentumLattice& lat) {
  ChargeDensity v = ChargeDensity::zero(lat);
  for (int i = 0; i < rho.size(); ++i) {
    const Vector3i d = lat.diff_vector(i);
    if (d == Vector3i::Zero()) continue;
    const Real q2 = lat.diff_momentum(i).squaredNorm();
    v.coeff[i] = 4.0 * kPi * rho.coeff[i] / q2;
  }
  return v;
}

ChargeDensity operator+(const ChargeDensity& a, const ChargeDensity& b) {
  assert(a.same_grid(b));
  ChargeDensity r = a;
  r.coeff += b.coeff;
  return r;
}

ChargeDensity operator-(const ChargeDensity& a, const ChargeDensity& b) {
  assert(a.same_grid(b));
  ChargeDensity r = a;
  r.coeff -= b.coeff;
  return r;
}

ChargeDensity operator*(Real s, const ChargeDensity& a) {
  ChargeDensity r = a;
  r.coeff *= s;
  return r;
}

}  // namespace vacpol
