#pragma once

#include <array>
#include <utility>
#include <vector>

#include "vacpol/vacuum.hpp"

namespace vacpol {

/// Regulator masses and coefficients with c0 = 1, m0 = m, subject to the
/// sum rules c0 + c1 + c2 = 0 and c0 m0^2 + c1 m1^2 + c2 m2^2 = 0.
struct PVSetup {
  Real m0 = 1.0, m1 = 2.0, m2 = 3.0;
  Real c0 = 1.0, c1 = 0.0, c2 = 0.0;

  Real mass(int j) const { return j == 0 ? m0 : (j == 1 ? m1 : m2); }
  Real coeff(int j) const { return j == 0 ? c0 : (j == 1 ? c1 : c2); }
};

/// Solve the two sum rules for (c1, c2). Throws Error with code
/// DegenerateMasses when m1 == m2.
std::pair<Real, Real> pv_coefficients(Real m, Real m1, Real m2);

/// Validated setup; enforces m1, m2 > m, m1 != m2 and checks the sum rules
/// to 1e-12.
PVSetup make_pv_setup(Real m, Real m1, Real m2);

/// Scalar and vector potential on the difference grid, kept in Coulomb
/// gauge: construction zeroes the q = 0 modes and projects A onto its
/// divergence-free part, so a pure-gradient vector field is annihilated.
struct EMPotential {
  ChargeDensity V;
  std::array<ChargeDensity, 3> A;

  static EMPotential zero(const MomentumLattice& lat) {
    return {ChargeDensity::zero(lat),
            {ChargeDensity::zero(lat), ChargeDensity::zero(lat), ChargeDensity::zero(lat)}};
  }
};

/// Remove the longitudinal part mode-wise: A_hat(q) <- (I - qq^T/|q|^2) A_hat(q).
/// Idempotent; afterwards q . A_hat(q) = 0 for q != 0.
void transverse_project(std::array<ChargeDensity, 3>& A, const MomentumLattice& lat);

/// Normalize raw fields into a gauge-fixed potential.
EMPotential make_em_potential(const ChargeDensity& V, const std::array<ChargeDensity, 3>& A,
                              const MomentumLattice& lat);

EMPotential operator+(const EMPotential& a, const EMPotential& b);

/// Gradient of a periodic scalar field, (grad phi)_hat(q) = i q phi_hat(q).
/// Purely longitudinal; useful for gauge tests.
std::array<ChargeDensity, 3> gradient_field(const ChargeDensity& phi,
                                            const MomentumLattice& lat);

/// Dirac operator at mass mj dressed by the potential: diagonal mode
/// symbols plus couplings -e (V_hat(k-k') I + alpha . A_hat(k-k')).
MatrixXc dressed_dirac(Real mj, Real e, const EMPotential& pot, const MomentumLattice& lat);

/// Regulated vacuum-energy difference
///   (1/2) sum_j c_j (tr |D_{mj,0}| - tr |D_{mj,e pot}|),
/// each absolute value via a full eigendecomposition. The three mass terms
/// are independent and run concurrently.
Real pv_trace_term(const EMPotential& pot, Real e, const PVSetup& pv,
                   const MomentumLattice& lat);

/// Classical field energy (1/8pi) (|curl A|^2 - |grad V|^2) in Fourier,
/// with the box Parseval factor L^3.
Real field_energy(const EMPotential& pot, const MomentumLattice& lat);

/// Regulated Lagrangian: trace term of pot + pot_ext plus the field energy
/// of the dynamical potential alone.
Real pv_lagrangian(const EMPotential& pot, const EMPotential& pot_ext, Real e,
                   const PVSetup& pv, const MomentumLattice& lat);

struct SaddleConfig {
  Real radius = 1.0;    // constraint balls |grad V|, |curl A| < radius sqrt(m)/e
  Real step_v = 0.5;    // relaxation factors of the preconditioned steps
  Real step_a = 0.5;
  Real tol = 1e-8;      // on the stationarity residual norms
  int max_outer = 500;
  int stall_limit = 25;  // consecutive ball-projection hits before giving up
};

struct SaddleTraceRow {
  int iteration;
  Real lagrangian;
  Real grad_v;
  Real grad_a;
};

struct SaddleResult {
  EMPotential pot;
  int iterations = 0;
  std::vector<SaddleTraceRow> trace;
};

/// Alternating ascent in V and descent in A of the regulated Lagrangian,
/// with mode-wise 1/|q|^2 preconditioning, transverse projection of A and
/// projection onto the constraint balls. Throws Error with code
/// MaxOuterExceeded or BoundaryStall.
SaddleResult saddle_solve(const EMPotential& pot_ext, Real e, const PVSetup& pv,
                          const SaddleConfig& cfg, const MomentumLattice& lat);

/// First-order optimality residuals of a candidate saddle: Fourier norms of
/// the stationarity equations
///   |q|^2 V_hat + 4 pi e rho_hat = 0,   |q|^2 A_hat - 4 pi e j_hat^T = 0,
/// with rho, j the densities of the coefficient-weighted sum of negative
/// projectors at the three masses. Diagnostic only.
std::pair<Real, Real> pv_residuals(const EMPotential& pot_star, const EMPotential& pot_ext,
                                   Real e, const PVSetup& pv, const MomentumLattice& lat);

}  // namespace vacpol
