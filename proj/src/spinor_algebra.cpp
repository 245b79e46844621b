#include "vacpol/spinor_algebra.hpp"

namespace vacpol {

namespace {

DiracMatrices build_matrices() {
  const Complex i(0.0, 1.0);

  Matrix2c s1, s2, s3, id;
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  id.setIdentity();

  auto off_diag = [](const Matrix2c& s) {
    Matrix4c a = Matrix4c::Zero();
    a.block<2, 2>(0, 2) = s;
    a.block<2, 2>(2, 0) = s;
    return a;
  };

  DiracMatrices d;
  d.alpha1 = off_diag(s1);
  d.alpha2 = off_diag(s2);
  d.alpha3 = off_diag(s3);
  d.beta = Matrix4c::Zero();
  d.beta.block<2, 2>(0, 0) = id;
  d.beta.block<2, 2>(2, 2) = -id;
  return d;
}

}  // namespace

const DiracMatrices& dirac_matrices() {
  static const DiracMatrices d = build_matrices();
  return d;
}

ModeSymbol free_symbol(const Vector3r& k, Real m) {
  const DiracMatrices& d = dirac_matrices();
  ModeSymbol sym;
  sym.k = k;
  sym.m = m;
  sym.matrix = k.x() * d.alpha1 + k.y() * d.alpha2 + k.z() * d.alpha3 + m * d.beta;
  return sym;
}

Matrix4c free_negative_projector(const ModeSymbol& sym) {
  return 0.5 * (Matrix4c::Identity() - sym.matrix / sym.energy());
}

Matrix4c charge_conjugation_matrix() {
  const DiracMatrices& d = dirac_matrices();
  return Complex(0.0, 1.0) * d.beta * d.alpha2;
}

Vector4c charge_conjugate_spinor(const Vector4c& f) {
  return charge_conjugation_matrix() * f.conjugate();
}

}  // namespace vacpol
