#include "vacpol/scf.hpp"

#include <cmath>

#include "vacpol/errors.hpp"

namespace vacpol {

MatrixXc assemble_mean_field(const ChargeDensity& rho, const ChargeDensity& nu, Real alpha,
                             const MomentumLattice& lat, Real m) {
  const ChargeDensity w = poisson_potential(rho - nu, lat);
  MatrixXc d = free_dirac_operator(lat, m);
  const int mc = lat.mode_count();
  for (int a = 0; a < mc; ++a)
    for (int b = 0; b < mc; ++b) {
      if (a == b) continue;
      const Complex v = alpha * w.coeff[lat.diff_index(lat.mode(a) - lat.mode(b))];
      for (int s = 0; s < 4; ++s) d(4 * a + s, 4 * b + s) += v;
    }
  return d;
}

namespace {

struct Spectrum {
  VectorXr values;
  MatrixXc vectors;
};

Spectrum diagonalize(const MatrixXc& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

void count_levels(const Spectrum& sp, Real mu, Real eps, int* strict_count,
                  int* kernel_count) {
  int strict = 0, kernel = 0;
  for (int i = 0; i < sp.values.size(); ++i) {
    if (std::abs(sp.values[i] - mu) <= eps)
      ++kernel;
    else if (sp.values[i] < mu)
      ++strict;
  }
  *strict_count = strict;
  *kernel_count = kernel;
}

/// Projector onto eigenstates strictly below mu (outside the eps window)
/// plus weight times the near-degenerate ones.
MatrixXc occupied_projector(const Spectrum& sp, Real mu, Real eps, Real weight) {
  const int n = static_cast<int>(sp.values.size());
  MatrixXc cols(n, n);
  int used = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(sp.values[i] - mu) <= eps) {
      if (weight != 0.0) cols.col(used++) = std::sqrt(weight) * sp.vectors.col(i);
    } else if (sp.values[i] < mu) {
      cols.col(used++) = sp.vectors.col(i);
    }
  }
  MatrixXc p = MatrixXc::Zero(n, n);
  if (used > 0) p.noalias() = cols.leftCols(used) * cols.leftCols(used).adjoint();
  return p;
}

Real state_charge(const VacuumState& s) {
  // tr(Qpp + Qmm) equals the full trace on the finite basis.
  return s.Q.trace().real();
}

}  // namespace

std::pair<VacuumState, bool> spectral_update(const MatrixXc& mean_field, Real mu,
                                             Real kernel_eps, const MomentumLattice& lat,
                                             Real m) {
  const Spectrum sp = diagonalize(mean_field);
  int strict = 0, kernel = 0;
  count_levels(sp, mu, kernel_eps, &strict, &kernel);
  VacuumState s{occupied_projector(sp, mu, kernel_eps, 0.0) - free_projector_full(lat, m), m};
  return {std::move(s), kernel > 0};
}

namespace {

struct FixedMuResult {
  VacuumState state;
  ChargeDensity rho;
  std::vector<Real> residuals;
  int iterations = 0;
  int strict = 0;
  int kernel = 0;
  bool used_delta = false;
};

/// Damped density iteration at fixed multiplier. When target is set, the
/// near-degenerate level at mu is filled fractionally so the charge meets
/// the target whenever that is possible at this mu.
FixedMuResult iterate_fixed_mu(const ChargeDensity& nu, Real alpha, Real mu,
                               const SCFConfig& cfg, const MomentumLattice& lat, Real m,
                               const ChargeDensity& rho_start,
                               const std::optional<Real>& target, bool degenerate_is_error) {
  const MatrixXc p_free = free_projector_full(lat, m);
  const Real base_charge = -static_cast<Real>(2 * lat.mode_count());

  FixedMuResult out;
  ChargeDensity rho = rho_start;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const MatrixXc d = assemble_mean_field(rho, nu, alpha, lat, m);
    const Spectrum sp = diagonalize(d);

    int strict = 0, kernel = 0;
    count_levels(sp, mu, cfg.kernel_eps, &strict, &kernel);
    Real weight = 0.0;
    if (target) {
      const Real deficit = *target - (base_charge + strict);
      if (kernel > 0 && deficit > cfg.charge_tol)
        weight = std::min(1.0, deficit / kernel);
    } else if (kernel > 0 && degenerate_is_error) {
      throw Error(ErrorCode::Degenerate,
                  "eigenvalue within kernel_eps of mu in unconstrained solve");
    }

    const MatrixXc occ = occupied_projector(sp, mu, cfg.kernel_eps, weight);
    VacuumState state{occ - p_free, m};
    const ChargeDensity rho_raw = density(state, lat);

    const ChargeDensity rho_next = rho + cfg.mixing * (rho_raw - rho);
    const Real res = coulomb_norm(rho_next - rho, lat);
    out.residuals.push_back(res);
    rho = rho_next;
    out.iterations = it;

    if (res <= cfg.tol) {
      out.state = std::move(state);
      out.rho = rho_raw;
      out.strict = strict;
      out.kernel = kernel;
      out.used_delta = weight > 0.0;
      return out;
    }
  }
  throw Error(ErrorCode::MaxIterExceeded,
              "no self-consistency after " + std::to_string(cfg.max_iter) + " iterations");
}

SCFResult finish(FixedMuResult&& fr, const ChargeDensity& nu, Real alpha,
                 const MomentumLattice& lat, Real mu) {
  SCFResult r;
  r.energy = bdf_energy(fr.state, nu, alpha, lat);
  r.charge = state_charge(fr.state);
  r.state = std::move(fr.state);
  r.density = std::move(fr.rho);
  r.iterations = fr.iterations;
  r.residual_history = std::move(fr.residuals);
  r.mu = mu;
  r.degenerate = fr.used_delta;
  return r;
}

}  // namespace

SCFResult scf_solve(const ChargeDensity& nu, Real alpha, const SCFConfig& cfg,
                    const MomentumLattice& lat, Real m,
                    const std::optional<ChargeDensity>& rho0) {
  if (alpha < 0.0) throw std::invalid_argument("coupling must be non-negative");
  const ChargeDensity start = rho0 ? *rho0 : ChargeDensity::zero(lat);
  FixedMuResult fr =
      iterate_fixed_mu(nu, alpha, 0.0, cfg, lat, m, start, std::nullopt, true);
  return finish(std::move(fr), nu, alpha, lat, 0.0);
}

SCFResult scf_solve_charged(const ChargeDensity& nu, Real alpha, Real target_charge,
                            const SCFConfig& cfg, const MomentumLattice& lat, Real m,
                            const std::optional<ChargeDensity>& rho0) {
  const Real base = -static_cast<Real>(2 * lat.mode_count());
  const ChargeDensity start = rho0 ? *rho0 : ChargeDensity::zero(lat);

  // Converged charge range reachable at a fixed mu: [strict, strict + kernel]
  // above the filled sea, the kernel part by fractional occupation.
  auto probe = [&](Real mu) {
    FixedMuResult fr = iterate_fixed_mu(nu, alpha, mu, cfg, lat, m, start,
                                        std::optional<Real>(target_charge), false);
    const Real lo = base + fr.strict;
    const Real hi = base + fr.strict + fr.kernel;
    return std::tuple<FixedMuResult, Real, Real>(std::move(fr), lo, hi);
  };

  Real lo = cfg.mu_lo * m;
  Real hi = cfg.mu_hi * m;

  auto [fr_hi, hi_min, hi_max] = probe(hi);
  if (hi_max < target_charge - cfg.charge_tol)
    throw Error(ErrorCode::ChargeUnreachable, "charge not reachable at top of mu bracket");
  if (target_charge >= hi_min - cfg.charge_tol)
    return finish(std::move(fr_hi), nu, alpha, lat, hi);

  auto [fr_lo, lo_min, lo_max] = probe(lo);
  if (lo_min > target_charge + cfg.charge_tol)
    throw Error(ErrorCode::ChargeUnreachable, "charge not reachable at bottom of mu bracket");
  if (target_charge <= lo_max + cfg.charge_tol)
    return finish(std::move(fr_lo), nu, alpha, lat, lo);

  for (int step = 0; step < cfg.max_bisection; ++step) {
    const Real mid = 0.5 * (lo + hi);
    auto [fr, cmin, cmax] = probe(mid);
    if (target_charge >= cmin - cfg.charge_tol && target_charge <= cmax + cfg.charge_tol)
      return finish(std::move(fr), nu, alpha, lat, mid);
    if (cmin > target_charge)
      hi = mid;
    else
      lo = mid;
  }
  throw Error(ErrorCode::ChargeUnreachable, "mu bisection exhausted");
}

}  // namespace vacpol
