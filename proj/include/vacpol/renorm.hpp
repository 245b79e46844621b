#pragma once

#include <vector>

#include "vacpol/scf.hpp"

namespace vacpol {

struct RenormConstants {
  Real ratio = 0.0;  // cutoff over mass
  Real B = 0.0;
  Real alpha_bare = 0.0;
  Real alpha_ph = 0.0;
};

/// Charge-screening constant of the sharp-cutoff vacuum,
///   B(r) = (1/pi) int_0^{r/sqrt(1+r^2)} (z^2 - z^4/3) / (1 - z^2) dz,
/// evaluated by adaptive quadrature after the substitution z = tanh(u),
/// which keeps the integrand bounded up to very large ratios.
/// Absolute error <= 1e-10. Positive and strictly increasing.
Real b_constant(Real ratio);

/// Large-ratio closed form (2/3pi) log r - 5/(9pi) + 2 log2/(3pi);
/// the remainder against b_constant is O(1/r^2).
Real b_asymptotic(Real ratio);

/// alpha_ph = alpha / (1 + alpha B).
Real renormalize_coupling(Real alpha_bare, Real B);

/// Inverse map alpha = alpha_ph / (1 - alpha_ph B); throws Error with code
/// LandauPoleViolation when alpha_ph * B >= 1, where no bare coupling exists.
Real bare_coupling(Real alpha_ph, Real B);

struct LandauCutoff {
  Real asymptotic;  // m exp(3 pi / (2 alpha_ph))
  Real exact;       // m times the ratio solving alpha_ph B(ratio) = 1
};

LandauCutoff landau_cutoff(Real alpha_ph, Real m);

struct ResponseResult {
  Real b_lat = 0.0;       // extrapolated (rho_hat/nu_hat)/alpha at q_min
  Real ratio_full = 0.0;  // measured at alpha
  Real ratio_half = 0.0;  // measured at alpha/2
  Vector3i qmin = Vector3i::Zero();
};

/// Smallest nonzero difference-grid momentum with a nonvanishing probe
/// coefficient; deterministic tie-break (lexicographic).
Vector3i smallest_probe_mode(const ChargeDensity& nu, const MomentumLattice& lat);

/// Linear-response constant of the lattice vacuum at the smallest probe
/// momentum: solves the vacuum at alpha and alpha/2 and Richardson
/// extrapolates (rho_hat/nu_hat)/alpha to alpha -> 0. Throws Error with
/// code NonlinearRegime when the two ratios differ by more than 5%.
ResponseResult lattice_response_constant(const ChargeDensity& nu, Real alpha_small,
                                         const MomentumLattice& lat, Real m,
                                         const SCFConfig& cfg);

struct ChargeIdentityReport {
  bool skipped = false;  // probe vanished at q_min
  Real screening_lhs = 0.0;  // (nu_hat - rho_hat) / nu_hat at q_min
  Real screening_rhs = 0.0;  // 1 / (1 + alpha b_lat)
  Real rel_dev = 0.0;
  Vector3i qmin = Vector3i::Zero();
};

/// Dressed-charge identity in linear response: compares the measured
/// screening ratio of a converged solution against 1/(1 + alpha B_lat).
/// Report only, never throws.
ChargeIdentityReport verify_charge_identity(const SCFResult& result, const ChargeDensity& nu,
                                            Real alpha, Real b_lat,
                                            const MomentumLattice& lat);

struct ExpansionFit {
  std::vector<ChargeDensity> nu_k;  // order k+1 coefficients, k = 1..K
  ChargeDensity leading;            // order 1 coefficient; should match nu
  std::vector<Real> samples;        // physical couplings used
  std::vector<Real> residuals;      // per-sample rms misfit over modes
  Real conversion_B = 0.0;          // bare coupling used was a/(1 - a B)
};

/// Least-squares fit of the dressed density alpha (nu - rho*) as a
/// polynomial in the sampled coupling, mode by mode, with no constant term.
/// Requires at least K+2 samples. conversion_B maps each sample a to the
/// bare coupling a/(1 - a B) before solving; zero uses samples directly.
/// Throws Error with code FitIllConditioned for degenerate sample spreads.
ExpansionFit dressed_density_expansion(const ChargeDensity& nu, const std::vector<Real>& samples,
                                       int K, const MomentumLattice& lat, Real m,
                                       const SCFConfig& cfg, Real conversion_B = 0.0);

}  // namespace vacpol
