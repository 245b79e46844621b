#include "vacpol/renorm.hpp"

#include <cmath>
#include <limits>

#include "vacpol/errors.hpp"
#include "vacpol/quadrature.hpp"

namespace vacpol {

namespace {

// atanh of the upper limit r/sqrt(1+r^2), computed without cancellation:
// 1 - Z = 1 / (sqrt(1+r^2) (sqrt(1+r^2) + r)).
Real upper_limit_atanh(Real r) {
  const Real s = std::sqrt(1.0 + r * r);
  const Real one_minus_z = 1.0 / (s * (s + r));
  const Real one_plus_z = (s + r) / s;
  return 0.5 * std::log(one_plus_z / one_minus_z);
}

}  // namespace

Real b_constant(Real ratio) {
  if (ratio <= 0.0) throw std::invalid_argument("ratio must be positive");
  if (!std::isfinite(ratio)) return std::numeric_limits<Real>::infinity();
  const Real u_max = upper_limit_atanh(ratio);
  const auto integrand = [](Real u) {
    const Real t2 = std::pow(std::tanh(u), 2);
    return t2 - t2 * t2 / 3.0;
  };
  return integrate_adaptive(integrand, 0.0, u_max, 1e-12) / kPi;
}

Real b_asymptotic(Real ratio) {
  if (ratio <= 0.0) throw std::invalid_argument("ratio must be positive");
  return (2.0 / 3.0 * std::log(ratio) - 5.0 / 9.0 + 2.0 / 3.0 * std::log(2.0)) / kPi;
}

Real renormalize_coupling(Real alpha_bare, Real B) {
  if (alpha_bare < 0.0) throw std::invalid_argument("coupling must be non-negative");
  return alpha_bare / (1.0 + alpha_bare * B);
}

Real bare_coupling(Real alpha_ph, Real B) {
  if (alpha_ph < 0.0) throw std::invalid_argument("coupling must be non-negative");
  if (alpha_ph * B >= 1.0)
    throw Error(ErrorCode::LandauPoleViolation,
                "alpha_ph * B >= 1, no bare coupling exists at this cutoff");
  return alpha_ph / (1.0 - alpha_ph * B);
}

LandauCutoff landau_cutoff(Real alpha_ph, Real m) {
  if (alpha_ph <= 0.0) throw std::invalid_argument("alpha_ph must be positive");
  LandauCutoff out;
  out.asymptotic = m * std::exp(3.0 * kPi / (2.0 * alpha_ph));
  if (!std::isfinite(out.asymptotic)) {
    out.exact = out.asymptotic;
    return out;
  }

  // alpha_ph B(r) = 1 has a unique root since B is increasing; bracket it
  // in log r around the asymptotic estimate. The exact log exceeds the
  // asymptotic one by less than 1, so a margin of 10 always brackets; the
  // cap keeps exp() representable and reports overflow as infinity.
  const Real target = 1.0 / alpha_ph;
  Real lo = std::log(1e-6);
  Real hi = std::min(std::log(out.asymptotic / m) + 10.0, 690.0);
  if (b_constant(std::exp(hi)) < target) {
    out.exact = std::numeric_limits<Real>::infinity();
    return out;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
    const Real mid = 0.5 * (lo + hi);
    (b_constant(std::exp(mid)) < target ? lo : hi) = mid;
  }
  out.exact = m * std::exp(0.5 * (lo + hi));
  return out;
}

Vector3i smallest_probe_mode(const ChargeDensity& nu, const MomentumLattice& lat) {
  Vector3i best = Vector3i::Zero();
  Real best_q2 = 0.0;
  bool found = false;
  for (int i = 0; i < nu.size(); ++i) {
    const Vector3i d = lat.diff_vector(i);
    if (d == Vector3i::Zero() || std::abs(nu.coeff[i]) < 1e-300) continue;
    const Real q2 = d.cast<Real>().squaredNorm();
    if (!found || q2 < best_q2 ||
        (q2 == best_q2 && std::lexicographical_compare(d.data(), d.data() + 3,
                                                       best.data(), best.data() + 3))) {
      best = d;
      best_q2 = q2;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("probe density has no nonzero mode");
  return best;
}

ResponseResult lattice_response_constant(const ChargeDensity& nu, Real alpha_small,
                                         const MomentumLattice& lat, Real m,
                                         const SCFConfig& cfg) {
  if (alpha_small <= 0.0) throw std::invalid_argument("alpha must be positive");
  ResponseResult out;
  out.qmin = smallest_probe_mode(nu, lat);
  const int idx = lat.diff_index(out.qmin);

  auto measure = [&](Real a) {
    const SCFResult r = scf_solve(nu, a, cfg, lat, m);
    return (r.density.coeff[idx] / nu.coeff[idx]).real() / a;
  };
  out.ratio_full = measure(alpha_small);
  out.ratio_half = measure(0.5 * alpha_small);

  if (std::abs(out.ratio_full - out.ratio_half) > 0.05 * std::abs(out.ratio_half))
    throw Error(ErrorCode::NonlinearRegime,
                "dressed response is not linear over the sampled couplings");

  out.b_lat = 2.0 * out.ratio_half - out.ratio_full;
  return out;
}

ChargeIdentityReport verify_charge_identity(const SCFResult& result, const ChargeDensity& nu,
                                            Real alpha, Real b_lat,
                                            const MomentumLattice& lat) {
  ChargeIdentityReport rep;
  Vector3i qmin;
  try {
    qmin = smallest_probe_mode(nu, lat);
  } catch (const std::invalid_argument&) {
    rep.skipped = true;
    return rep;
  }
  rep.qmin = qmin;
  const int idx = lat.diff_index(qmin);
  const Complex nu_hat = nu.coeff[idx];
  rep.screening_lhs = ((nu_hat - result.density.coeff[idx]) / nu_hat).real();
  rep.screening_rhs = 1.0 / (1.0 + alpha * b_lat);
  rep.rel_dev = std::abs(rep.screening_lhs - rep.screening_rhs) / std::abs(rep.screening_rhs);
  return rep;
}

ExpansionFit dressed_density_expansion(const ChargeDensity& nu, const std::vector<Real>& samples,
                                       int K, const MomentumLattice& lat, Real m,
                                       const SCFConfig& cfg, Real conversion_B) {
  const int S = static_cast<int>(samples.size());
  if (K < 1) throw std::invalid_argument("expansion order must be >= 1");
  if (S < K + 2)
    throw std::invalid_argument("need at least K+2 sample couplings");

  // Dressed density alpha (nu - rho*) at each sample coupling.
  std::vector<ChargeDensity> dressed;
  dressed.reserve(S);
  for (Real a_ph : samples) {
    const Real a = conversion_B == 0.0 ? a_ph : bare_coupling(a_ph, conversion_B);
    const SCFResult r = scf_solve(nu, a, cfg, lat, m);
    dressed.push_back(a * (nu - r.density));
  }

  // Vandermonde design without constant term: columns a, a^2, ..., a^{K+1}.
  const int P = K + 1;
  Eigen::MatrixXd X(S, P);
  for (int i = 0; i < S; ++i)
    for (int p = 0; p < P; ++p) X(i, p) = std::pow(samples[i], p + 1);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Real cond = svd.singularValues()(0) / svd.singularValues()(P - 1);
  if (!std::isfinite(cond) || cond > 1e12)
    throw Error(ErrorCode::FitIllConditioned, "sample spread too small for the fit order");

  // Solve all modes at once: D is S x modes, coefficients are P x modes.
  const int n_modes = dressed[0].size();
  MatrixXc rhs(S, n_modes);
  for (int i = 0; i < S; ++i) rhs.row(i) = dressed[i].coeff.transpose();

  const Eigen::MatrixXd rhs_re = rhs.real();
  const Eigen::MatrixXd rhs_im = rhs.imag();
  const MatrixXc coef =
      svd.solve(rhs_re).cast<Complex>() + Complex(0, 1) * svd.solve(rhs_im).cast<Complex>();

  ExpansionFit fit;
  fit.samples = samples;
  fit.conversion_B = conversion_B;
  fit.leading = ChargeDensity::zero(lat);
  fit.leading.coeff = coef.row(0).transpose();
  for (int k = 1; k <= K; ++k) {
    ChargeDensity nk = ChargeDensity::zero(lat);
    nk.coeff = coef.row(k).transpose();
    fit.nu_k.push_back(std::move(nk));
  }

  const MatrixXc misfit = X.cast<Complex>() * coef - rhs;
  for (int i = 0; i < S; ++i)
    fit.residuals.push_back(misfit.row(i).norm() / std::sqrt(static_cast<Real>(n_modes)));
  return fit;
}

}  // namespace vacpol
