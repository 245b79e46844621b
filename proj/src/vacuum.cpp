#include "vacpol/vacuum.hpp"

#include <stdexcept>

namespace vacpol {

MatrixXc free_dirac_operator(const MomentumLattice& lat, Real m) {
  MatrixXc d = MatrixXc::Zero(lat.dim(), lat.dim());
  for (int a = 0; a < lat.mode_count(); ++a)
    d.block<4, 4>(4 * a, 4 * a) = free_symbol(lat.momentum(a), m).matrix;
  return d;
}

MatrixXc free_projector_full(const MomentumLattice& lat, Real m) {
  MatrixXc p = MatrixXc::Zero(lat.dim(), lat.dim());
  for (int a = 0; a < lat.mode_count(); ++a)
    p.block<4, 4>(4 * a, 4 * a) = free_negative_projector(free_symbol(lat.momentum(a), m));
  return p;
}

VectorXr free_energies(const MomentumLattice& lat, Real m) {
  VectorXr e(lat.dim());
  for (int a = 0; a < lat.mode_count(); ++a)
    e.segment<4>(4 * a).setConstant(std::sqrt(lat.momentum(a).squaredNorm() + m * m));
  return e;
}

MatrixXc charge_conjugate(const MatrixXc& op, const MomentumLattice& lat) {
  const Matrix4c c = charge_conjugation_matrix();
  const int mc = lat.mode_count();
  MatrixXc out(lat.dim(), lat.dim());
  for (int a = 0; a < mc; ++a) {
    const int na = lat.negation_of(a);
    if (na < 0) throw std::invalid_argument("lattice not symmetric under negation");
    for (int b = 0; b < mc; ++b) {
      const int nb = lat.negation_of(b);
      out.block<4, 4>(4 * a, 4 * b) =
          c * op.block<4, 4>(4 * na, 4 * nb).conjugate() * c.transpose();
    }
  }
  return out;
}

BlockDecomposition block_decompose(const VacuumState& s, const MomentumLattice& lat) {
  const MatrixXc pm = free_projector_full(lat, s.m);
  const MatrixXc pp = MatrixXc::Identity(lat.dim(), lat.dim()) - pm;
  BlockDecomposition b;
  b.Qpp = pp * s.Q * pp;
  b.Qmm = pm * s.Q * pm;
  b.Qpm = pp * s.Q * pm;
  b.Qmp = pm * s.Q * pp;
  return b;
}

bool check_constraint(const VacuumState& s, const MomentumLattice& lat, Real tol) {
  const BlockDecomposition b = block_decompose(s, lat);
  const MatrixXc gap = b.Qpp - b.Qmm - s.Q * s.Q;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(gap, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

ChargeDensity density(const MatrixXc& M, const MomentumLattice& lat) {
  ChargeDensity rho = ChargeDensity::zero(lat);
  const Real inv_vol = 1.0 / lat.volume();
  const int mc = lat.mode_count();
  for (int a = 0; a < mc; ++a)
    for (int b = 0; b < mc; ++b) {
      const int idx = lat.diff_index(lat.mode(a) - lat.mode(b));
      Complex tr = 0.0;
      for (int s = 0; s < 4; ++s) tr += M(4 * a + s, 4 * b + s);
      rho.coeff[idx] += inv_vol * tr;
    }
  return rho;
}

CurrentDensity current(const MatrixXc& M, const MomentumLattice& lat) {
  CurrentDensity j = CurrentDensity::zero(lat);
  const DiracMatrices& d = dirac_matrices();
  const Real inv_vol = 1.0 / lat.volume();
  const int mc = lat.mode_count();
  for (int a = 0; a < mc; ++a)
    for (int b = 0; b < mc; ++b) {
      const int idx = lat.diff_index(lat.mode(a) - lat.mode(b));
      const Matrix4c block = M.block<4, 4>(4 * a, 4 * b);
      for (int i = 0; i < 3; ++i)
        j.component[i].coeff[idx] += inv_vol * (d.alpha(i) * block).trace();
    }
  return j;
}

Real relative_trace(const VacuumState& s, const MomentumLattice& lat) {
  // |D_free| is E(k) I4 per mode, so only diagonal 4x4 blocks contribute.
  Real sum = 0.0;
  for (int a = 0; a < lat.mode_count(); ++a) {
    const ModeSymbol sym = free_symbol(lat.momentum(a), s.m);
    const Matrix4c pm = free_negative_projector(sym);
    const Matrix4c pp = Matrix4c::Identity() - pm;
    const Matrix4c qaa = s.Q.block<4, 4>(4 * a, 4 * a);
    sum += sym.energy() * ((pp * qaa * pp).trace() - (pm * qaa * pm).trace()).real();
  }
  return sum;
}

Real bdf_energy(const VacuumState& s, const ChargeDensity& nu, Real alpha,
                const MomentumLattice& lat) {
  const ChargeDensity rho = density(s, lat);
  return relative_trace(s, lat) - alpha * coulomb_inner(rho, nu, lat) +
         0.5 * alpha * coulomb_inner(rho, rho, lat);
}

}  // namespace vacpol
