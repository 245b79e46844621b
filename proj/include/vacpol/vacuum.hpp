#pragma once

#include "vacpol/lattice.hpp"
#include "vacpol/spinor_algebra.hpp"
#include "vacpol/types.hpp"

namespace vacpol {

/// Free Dirac operator on the lattice spinor basis, block diagonal with
/// the mode symbols alpha.k + m beta.
MatrixXc free_dirac_operator(const MomentumLattice& lat, Real m);

/// Negative spectral projector of the free operator; block diagonal,
/// idempotent, rank 2 per mode.
MatrixXc free_projector_full(const MomentumLattice& lat, Real m);

/// Per-basis-entry energies sqrt(|k|^2 + m^2); this is the diagonal of
/// |D_free| in the spinor-mode basis.
VectorXr free_energies(const MomentumLattice& lat, Real m);

/// Conjugate a lattice operator by the charge conjugation, which maps the
/// Fourier mode k to -k and acts antiunitarily on spinors. Throws when the
/// mode set is not symmetric under negation.
MatrixXc charge_conjugate(const MatrixXc& op, const MomentumLattice& lat);

/// Hermitian perturbation Q = P - P^-_{m,0} of the free vacuum.
struct VacuumState {
  MatrixXc Q;
  Real m = 1.0;

  static VacuumState zero(const MomentumLattice& lat, Real m) {
    return {MatrixXc::Zero(lat.dim(), lat.dim()), m};
  }
};

/// Blocks of Q relative to the free spectral projectors:
/// Qpp = P+ Q P+, Qmm = P- Q P-, and the adjoint-paired off-diagonal pair.
struct BlockDecomposition {
  MatrixXc Qpp, Qmm, Qpm, Qmp;
};

BlockDecomposition block_decompose(const VacuumState& s, const MomentumLattice& lat);

/// True when the smallest eigenvalue of (Qpp - Qmm - Q^2) is >= -tol,
/// which is equivalent to the operator inequalities -P- <= Q <= P+.
bool check_constraint(const VacuumState& s, const MomentumLattice& lat, Real tol);

/// Charge density of a Hermitian lattice operator,
/// rho_hat(q) = (1/L^3) sum_k tr4 M_{(k+q),k}.
ChargeDensity density(const MatrixXc& M, const MomentumLattice& lat);

inline ChargeDensity density(const VacuumState& s, const MomentumLattice& lat) {
  return density(s.Q, lat);
}

/// Current density, same kernel trace with alpha_j inserted.
CurrentDensity current(const MatrixXc& M, const MomentumLattice& lat);

inline CurrentDensity current(const VacuumState& s, const MomentumLattice& lat) {
  return current(s.Q, lat);
}

/// Relative trace tr |D_free| (Qpp - Qmm); the block convention that gives
/// meaning to tr(D Q). Non-negative on constraint-satisfying states. Uses
/// only the diagonal 4x4 blocks of Q since |D_free| is block diagonal.
Real relative_trace(const VacuumState& s, const MomentumLattice& lat);

/// Reduced vacuum energy
///   E(Q) = tr|D|(Qpp - Qmm) - alpha D(rho_Q, nu) + (alpha/2) D(rho_Q, rho_Q).
/// Bounded below by -(alpha/2) D(nu, nu) on the constraint set.
Real bdf_energy(const VacuumState& s, const ChargeDensity& nu, Real alpha,
                const MomentumLattice& lat);

}  // namespace vacpol
