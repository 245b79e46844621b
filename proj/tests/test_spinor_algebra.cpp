#include <doctest.h>

#include <random>

#include "vacpol/spinor_algebra.hpp"
#include "vacpol/vacuum.hpp"
#include "test_support.hpp"

using namespace vacpol;

namespace {
Real mat_err(const Matrix4c& a, const Matrix4c& b) { return (a - b).cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("dirac matrices: block forms and algebra") {
  const DiracMatrices& d = dirac_matrices();

  Matrix4c beta_expected = Matrix4c::Zero();
  beta_expected.diagonal() << 1, 1, -1, -1;
  CHECK(mat_err(d.beta, beta_expected) == 0.0);

  const Matrix4c mats[4] = {d.alpha1, d.alpha2, d.alpha3, d.beta};
  for (const auto& m : mats) {
    CHECK(mat_err(m, m.adjoint()) == 0.0);
    CHECK(mat_err(m * m, Matrix4c::Identity()) == 0.0);
  }

  // Full anticommutation table, exact.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Matrix4c anti = mats[i] * mats[j] + mats[j] * mats[i];
      Matrix4c expected = Matrix4c::Zero();
      if (i == j) expected = 2.0 * Matrix4c::Identity();
      CHECK(mat_err(anti, expected) <= 1e-15);
    }
  CHECK(mat_err(d.alpha1 * d.alpha2 + d.alpha2 * d.alpha1, Matrix4c::Zero()) == 0.0);
}

TEST_CASE("free symbol spectrum is +-sqrt(|k|^2+m^2), twice each") {
  auto eigenvalues = [](const Matrix4c& m) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m);
    return es.eigenvalues();
  };

  const auto ev0 = eigenvalues(free_symbol(Vector3r(0, 0, 0), 1.0).matrix);
  CHECK(ev0(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ev0(1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ev0(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ev0(3) == doctest::Approx(1.0).epsilon(1e-14));

  const auto ev = eigenvalues(free_symbol(Vector3r(3, 0, 0), 4.0).matrix);
  CHECK(ev(0) == doctest::Approx(-5.0).epsilon(1e-14));
  CHECK(ev(1) == doctest::Approx(-5.0).epsilon(1e-14));
  CHECK(ev(2) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(ev(3) == doctest::Approx(5.0).epsilon(1e-14));

  std::mt19937 rng(11);
  std::normal_distribution<Real> g;
  for (int trial = 0; trial < 50; ++trial) {
    const Vector3r k(g(rng), g(rng), g(rng));
    const Real m = std::abs(g(rng)) + 0.1;
    const ModeSymbol sym = free_symbol(k, m);
    const Matrix4c sq = sym.matrix * sym.matrix;
    CHECK(mat_err(sq, (k.squaredNorm() + m * m) * Matrix4c::Identity()) <= 1e-13);
  }
}

TEST_CASE("negative projector: closed form, idempotent, rank 2") {
  const Matrix4c p0 = free_negative_projector(free_symbol(Vector3r(0, 0, 0), 1.0));
  Matrix4c lower = Matrix4c::Zero();
  lower.diagonal() << 0, 0, 1, 1;
  CHECK(mat_err(p0, lower) == 0.0);

  std::mt19937 rng(12);
  std::normal_distribution<Real> g;
  for (int trial = 0; trial < 50; ++trial) {
    const Vector3r k(g(rng), g(rng), g(rng));
    const ModeSymbol sym = free_symbol(k, std::abs(g(rng)) + 0.1);
    const Matrix4c p = free_negative_projector(sym);
    const Matrix4c pp = Matrix4c::Identity() - p;
    CHECK(mat_err(p * p, p) <= 1e-14);
    CHECK(mat_err(p, p.adjoint()) <= 1e-15);
    CHECK(std::abs(p.trace().real() - 2.0) <= 1e-13);
    CHECK(mat_err(p + pp, Matrix4c::Identity()) <= 1e-15);
    CHECK(mat_err(p * pp, Matrix4c::Zero()) <= 1e-14);
    // D acts as -E on the range of the projector.
    CHECK(((sym.matrix + sym.energy() * Matrix4c::Identity()) * p).cwiseAbs().maxCoeff() <=
          1e-13);
  }
}

TEST_CASE("charge conjugation is an involution on spinors") {
  std::mt19937 rng(13);
  std::normal_distribution<Real> g;
  for (int trial = 0; trial < 20; ++trial) {
    Vector4c f;
    for (int i = 0; i < 4; ++i) f(i) = Complex(g(rng), g(rng));
    const Vector4c twice = charge_conjugate_spinor(charge_conjugate_spinor(f));
    CHECK((twice - f).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("charge conjugation on lattice operators") {
  const MomentumLattice lat = build_lattice(2.0 * kPi, 1, 1.2);
  const Real m = 1.0;
  const MatrixXc d = free_dirac_operator(lat, m);
  const MatrixXc id = MatrixXc::Identity(lat.dim(), lat.dim());

  // C D C^-1 = -D for the free operator, and C I C^-1 = I.
  CHECK((charge_conjugate(d, lat) + d).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((charge_conjugate(id, lat) - id).cwiseAbs().maxCoeff() <= 1e-15);

  // Involution at the operator level.
  std::mt19937 rng(14);
  const MatrixXc h = vacpol::testing::random_hermitian(rng, lat.dim());
  CHECK((charge_conjugate(charge_conjugate(h, lat), lat) - h).cwiseAbs().maxCoeff() <= 1e-13);
}
