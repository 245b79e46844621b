#include <doctest.h>

#include <cmath>

#include "vacpol/errors.hpp"
#include "vacpol/renorm.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace vacpol;
using vacpol::testing::b_closed_form;
using vacpol::testing::perturbative_response_oracle;

namespace {

const Real kM = 1.0;

ChargeDensity gaussian_nu(const MomentumLattice& lat, Real Z, Real sigma) {
  ChargeDensity nu = ChargeDensity::zero(lat);
  for (int i = 0; i < nu.size(); ++i) {
    const Real q2 = lat.diff_momentum(i).squaredNorm();
    nu.coeff[i] = Z / lat.volume() * std::exp(-0.5 * sigma * sigma * q2);
  }
  return nu;
}

}  // namespace

TEST_CASE("screening constant: quadrature against the closed form") {
  for (Real r : {0.3, 1.0, 5.0, 10.0, 100.0, 1e4, 1e8})
    CHECK(std::abs(b_constant(r) - b_closed_form(r)) <= 1e-10);

  CHECK(b_constant(10.0) < b_constant(100.0));
  CHECK(b_constant(100.0) < b_constant(1000.0));
  CHECK(b_constant(1e-6) > 0.0);
  CHECK(b_constant(1e-6) < 1e-12);
}

TEST_CASE("asymptotic form: pinned value, remainder order, sign change") {
  CHECK(b_asymptotic(1.0) ==
        doctest::Approx((-5.0 / 9.0 + 2.0 / 3.0 * std::log(2.0)) / kPi).epsilon(1e-14));

  // Remainder times ratio^2 stays bounded (order 1/(3 pi)).
  for (Real r : {10.0, 30.0, 100.0, 300.0}) {
    const Real scaled = std::abs(b_constant(r) - b_asymptotic(r)) * r * r;
    CHECK(scaled > 0.05);
    CHECK(scaled < 0.2);
  }

  // The closed form goes negative below its zero crossing near ratio 1.15.
  CHECK(b_asymptotic(1.0) < 0.0);
  CHECK(b_asymptotic(1.3) > 0.0);
}

TEST_CASE("coupling renormalization and the Landau pole") {
  CHECK(renormalize_coupling(0.37, 0.0) == 0.37);
  CHECK(renormalize_coupling(0.1, 2.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

  for (Real a : {1e-4, 0.05, 0.3, 1.0})
    for (Real b : {0.0, 0.7, 3.0}) {
      const Real round = bare_coupling(renormalize_coupling(a, b), b);
      CHECK(std::abs(round - a) <= 1e-14 * std::max(1.0, a));
    }

  try {
    bare_coupling(0.5, 2.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LandauPoleViolation);
  }
  CHECK_NOTHROW(bare_coupling(0.4999999, 2.0));
}

TEST_CASE("Landau cutoff: closed form and quadrature bisection") {
  const LandauCutoff unit = landau_cutoff(1.5 * kPi, 1.0);
  CHECK(unit.asymptotic == doctest::Approx(std::exp(1.0)).epsilon(1e-14));

  for (Real a : {0.05, 0.1, 0.2}) {
    const LandauCutoff lc = landau_cutoff(a, 1.0);
    CHECK(a * b_constant(lc.exact) == doctest::Approx(1.0).epsilon(1e-8));
    const Real log_ratio = std::log(lc.exact) / std::log(lc.asymptotic);
    CHECK(std::abs(log_ratio - 1.0) < 0.2);
  }

  CHECK(landau_cutoff(0.01, 1.0).asymptotic > 1e100);
}

TEST_CASE("lattice response constant against the perturbative oracle") {
  const MomentumLattice lat = build_lattice(2.0 * kPi, 2, 2.2);
  const ChargeDensity nu = gaussian_nu(lat, 0.5, 1.0);

  SCFConfig cfg;
  cfg.mixing = 1.0;
  cfg.tol = 1e-11;
  const ResponseResult resp = lattice_response_constant(nu, 0.05, lat, kM, cfg);

  CHECK(resp.b_lat > 0.0);
  const Real oracle = perturbative_response_oracle(lat, kM, resp.qmin);
  CHECK(std::abs(resp.b_lat - oracle) <= 0.01 * oracle);

  // The vacuum does not respond at all when the coupling is switched off.
  const SCFResult decoupled = scf_solve(nu, 0.0, cfg, lat, kM);
  CHECK(decoupled.density.coeff.cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("box-size consistency of the lattice response") {
  // Fixed cutoff, growing box: the response at the smallest momentum
  // settles as the infrared resolution improves. The continuum constant is
  // printed for comparison but not asserted; the lattice value approaches
  // it only at leading log.
  const Real cutoff = 3.0;
  auto value = [&](Real mult) {
    const Real L = 2.0 * kPi * mult;
    const int N = static_cast<int>(std::ceil(cutoff * L / (2.0 * kPi)));
    const MomentumLattice lat = build_lattice(L, N, cutoff);
    return perturbative_response_oracle(lat, kM, Vector3i(1, 0, 0));
  };
  const Real b1 = value(1.0), b2 = value(2.0), b4 = value(4.0);
  CHECK(std::abs(b4 - b2) < 0.5 * std::abs(b2 - b1));
  MESSAGE("B_lat by box: ", b1, " ", b2, " ", b4, "; continuum B(", cutoff,
          ") = ", b_constant(cutoff));
}

TEST_CASE("nonlinear regime is reported, not extrapolated") {
  const MomentumLattice lat = build_lattice(2.0 * kPi, 1, 1.8);
  const ChargeDensity nu = gaussian_nu(lat, 1.0, 0.8);
  SCFConfig cfg;
  cfg.mixing = 0.3;
  cfg.tol = 1e-9;
  try {
    lattice_response_constant(nu, 5.0, lat, kM, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonlinearRegime);
  }
}

TEST_CASE("dressed-charge identity in linear response") {
  const MomentumLattice lat = build_lattice(2.0 * kPi, 2, 2.2);
  const ChargeDensity nu = gaussian_nu(lat, 0.5, 1.0);
  const Real alpha = 0.05;

  SCFConfig cfg;
  cfg.mixing = 1.0;
  cfg.tol = 1e-11;
  const ResponseResult resp = lattice_response_constant(nu, alpha, lat, kM, cfg);
  const SCFResult run = scf_solve(nu, alpha, cfg, lat, kM);
  const ChargeIdentityReport rep = verify_charge_identity(run, nu, alpha, resp.b_lat, lat);

  CHECK_FALSE(rep.skipped);
  CHECK(rep.screening_lhs > 0.0);
  CHECK(rep.screening_lhs < 1.0);
  CHECK(rep.rel_dev <= 0.02);

  // Doubling the coupling moves the factor toward 1/(1 + 2 alpha B).
  const SCFResult run2 = scf_solve(nu, 2.0 * alpha, cfg, lat, kM);
  const ChargeIdentityReport rep2 = verify_charge_identity(run2, nu, 2.0 * alpha, resp.b_lat, lat);
  CHECK(rep2.rel_dev <= 0.02);
  CHECK(rep2.screening_lhs < rep.screening_lhs);

  const ChargeIdentityReport skipped =
      verify_charge_identity(run, ChargeDensity::zero(lat), alpha, resp.b_lat, lat);
  CHECK(skipped.skipped);
}

TEST_CASE("order-by-order expansion of the dressed density") {
  const MomentumLattice lat = build_lattice(2.0 * kPi, 1, 1.8);
  const ChargeDensity nu = gaussian_nu(lat, 0.5, 1.0);
  SCFConfig cfg;
  cfg.mixing = 1.0;
  cfg.tol = 1e-11;

  const int K = 2;
  const std::vector<Real> samples = {0.02, 0.04, 0.06, 0.08};
  const ExpansionFit fit = dressed_density_expansion(nu, samples, K, lat, kM, cfg);

  // Leading coefficient recovers nu mode by mode.
  const Real nu_max = nu.coeff.cwiseAbs().maxCoeff();
  for (int i = 0; i < nu.size(); ++i) {
    if (std::abs(nu.coeff[i]) < 1e-6 * nu_max) continue;
    CHECK(std::abs(fit.leading.coeff[i] - nu.coeff[i]) <= 1e-3 * std::abs(nu.coeff[i]));
  }

  // First correction matches the linear-response constant at q_min.
  const Vector3i qmin = smallest_probe_mode(nu, lat);
  const Real b_orc = perturbative_response_oracle(lat, kM, qmin);
  const int idx = lat.diff_index(qmin);
  const Real nu1 = fit.nu_k[0].coeff[idx].real();
  const Real expected = -b_orc * nu.coeff[idx].real();
  CHECK(nu1 == doctest::Approx(expected).epsilon(0.02));

  // Halving the sample couplings shrinks the misfit (Taylor remainder).
  std::vector<Real> halved;
  for (Real s : samples) halved.push_back(0.5 * s);
  const ExpansionFit fit_half = dressed_density_expansion(nu, halved, K, lat, kM, cfg);
  const Real worst_full = *std::max_element(fit.residuals.begin(), fit.residuals.end());
  const Real worst_half = *std::max_element(fit_half.residuals.begin(), fit_half.residuals.end());
  CHECK(worst_half < worst_full);

  // Degenerate samples are rejected.
  try {
    dressed_density_expansion(nu, {0.05, 0.05, 0.05, 0.05}, K, lat, kM, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FitIllConditioned);
  }

  // Zero probe: every coefficient vanishes.
  const ExpansionFit zfit =
      dressed_density_expansion(ChargeDensity::zero(lat), samples, K, lat, kM, cfg);
  CHECK(zfit.leading.coeff.cwiseAbs().maxCoeff() <= 1e-12);
  for (const auto& nk : zfit.nu_k) CHECK(nk.coeff.cwiseAbs().maxCoeff() <= 1e-12);
}
