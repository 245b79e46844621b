#pragma once

#include "vacpol/types.hpp"

namespace vacpol {

/// The four anticommuting 4x4 matrices of the free Dirac operator,
/// alpha_k in off-diagonal Pauli blocks, beta = diag(I2, -I2).
struct DiracMatrices {
  Matrix4c alpha1;
  Matrix4c alpha2;
  Matrix4c alpha3;
  Matrix4c beta;

  const Matrix4c& alpha(int k) const {
    return k == 0 ? alpha1 : (k == 1 ? alpha2 : alpha3);
  }
};

const DiracMatrices& dirac_matrices();

/// Free Dirac symbol alpha.k + m beta at a single momentum mode.
/// Satisfies matrix^2 = (|k|^2 + m^2) I.
struct ModeSymbol {
  Vector3r k;
  Real m;
  Matrix4c matrix;

  Real energy() const { return std::sqrt(k.squaredNorm() + m * m); }
};

ModeSymbol free_symbol(const Vector3r& k, Real m);

/// Projector onto the negative-energy pair of the symbol,
/// (I - D/|D|)/2 with |D| = sqrt(|k|^2 + m^2) I. Rank 2 for m > 0.
Matrix4c free_negative_projector(const ModeSymbol& sym);

/// Spinor part of the charge conjugation, C f = i beta alpha2 conj(f).
/// The matrix is real orthogonal; applied twice with conjugation it is
/// the identity.
Matrix4c charge_conjugation_matrix();

Vector4c charge_conjugate_spinor(const Vector4c& f);

}  // namespace vacpol
