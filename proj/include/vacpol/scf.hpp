#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vacpol/vacuum.hpp"

namespace vacpol {

struct SCFConfig {
  Real mixing = 0.3;        // damping of the density update, in (0, 1]
  Real tol = 1e-8;          // Coulomb-norm threshold on the density change
  int max_iter = 500;
  Real kernel_eps = 1e-9;   // eigenvalues this close to mu count as degenerate
  Real mu_lo = -0.95;       // bisection bracket for the multiplier, units of m
  Real mu_hi = 0.95;
  Real charge_tol = 1e-8;
  int max_bisection = 80;
};

struct SCFResult {
  VacuumState state;
  ChargeDensity density;
  Real energy = 0.0;
  int iterations = 0;
  std::vector<Real> residual_history;
  Real mu = 0.0;          // 0 for the unconstrained problem
  bool degenerate = false;  // fractional occupation was needed
  Real charge = 0.0;        // tr(Qpp + Qmm)
};

/// Mean-field operator D_free + alpha V with V the convolution by the
/// Coulomb potential of (rho - nu): spinor-diagonal couplings
/// V_{(k,s),(k',s')} = delta_{ss'} 4 pi (rho - nu)_hat(k-k') / |k-k'|^2.
MatrixXc assemble_mean_field(const ChargeDensity& rho, const ChargeDensity& nu, Real alpha,
                             const MomentumLattice& lat, Real m);

/// Fill all eigenstates of the mean field below mu and subtract the free
/// vacuum. The boolean flags eigenvalues within kernel_eps of mu, where the
/// plain update is ambiguous.
std::pair<VacuumState, bool> spectral_update(const MatrixXc& mean_field, Real mu,
                                             Real kernel_eps, const MomentumLattice& lat,
                                             Real m);

/// Damped fixed-point iteration on the density for the self-consistent
/// vacuum. Starts from rho0 (zero when absent). Throws Error with code
/// MaxIterExceeded or Degenerate.
SCFResult scf_solve(const ChargeDensity& nu, Real alpha, const SCFConfig& cfg,
                    const MomentumLattice& lat, Real m,
                    const std::optional<ChargeDensity>& rho0 = std::nullopt);

/// Charge-constrained variant: outer bisection on the multiplier mu within
/// cfg.mu_lo*m..cfg.mu_hi*m so that tr(Qpp + Qmm) = target_charge, with
/// minimal fractional filling of eigenstates degenerate at mu. Throws Error
/// with code ChargeUnreachable when no bracketed mu yields the charge.
SCFResult scf_solve_charged(const ChargeDensity& nu, Real alpha, Real target_charge,
                            const SCFConfig& cfg, const MomentumLattice& lat, Real m,
                            const std::optional<ChargeDensity>& rho0 = std::nullopt);

}  // namespace vacpol
