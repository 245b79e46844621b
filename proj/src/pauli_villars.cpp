#include "vacpol/pauli_villars.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "vacpol/errors.hpp"

namespace vacpol {

std::pair<Real, Real> pv_coefficients(Real m, Real m1, Real m2) {
  if (m1 <= 0.0 || m2 <= 0.0) throw std::invalid_argument("masses must be positive");
  if (m1 == m2)
    throw Error(ErrorCode::DegenerateMasses, "equal regulator masses leave the sum rules singular");
  const Real c1 = (m2 * m2 - m * m) / (m1 * m1 - m2 * m2);
  const Real c2 = -1.0 - c1;
  return {c1, c2};
}

PVSetup make_pv_setup(Real m, Real m1, Real m2) {
  if (m <= 0.0) throw std::invalid_argument("mass must be positive");
  if (m1 <= m || m2 <= m)
    throw std::invalid_argument("regulator masses must exceed the physical mass");
  auto [c1, c2] = pv_coefficients(m, m1, m2);
  PVSetup pv{m, m1, m2, 1.0, c1, c2};
  const Real rule0 = pv.c0 + pv.c1 + pv.c2;
  const Real rule2 = pv.c0 * m * m + pv.c1 * m1 * m1 + pv.c2 * m2 * m2;
  if (std::abs(rule0) > 1e-12 || std::abs(rule2) > 1e-12 * m2 * m2)
    throw std::runtime_error("sum rules violated after the linear solve");
  return pv;
}

void transverse_project(std::array<ChargeDensity, 3>& A, const MomentumLattice& lat) {
  for (int i = 0; i < A[0].size(); ++i) {
    const Vector3i d = lat.diff_vector(i);
    if (d == Vector3i::Zero()) continue;
    const Vector3r q = lat.spacing() * d.cast<Real>();
    Complex qa = 0.0;
    for (int c = 0; c < 3; ++c) qa += q[c] * A[c].coeff[i];
    qa /= q.squaredNorm();
    for (int c = 0; c < 3; ++c) A[c].coeff[i] -= qa * q[c];
  }
}

EMPotential make_em_potential(const ChargeDensity& V, const std::array<ChargeDensity, 3>& A,
                              const MomentumLattice& lat) {
  EMPotential pot{V, A};
  const int zero = lat.diff_index(Vector3i::Zero());
  pot.V.coeff[zero] = 0.0;
  for (int c = 0; c < 3; ++c) pot.A[c].coeff[zero] = 0.0;
  transverse_project(pot.A, lat);
  return pot;
}

EMPotential operator+(const EMPotential& a, const EMPotential& b) {
  return {a.V + b.V, {a.A[0] + b.A[0], a.A[1] + b.A[1], a.A[2] + b.A[2]}};
}

std::array<ChargeDensity, 3> gradient_field(const ChargeDensity& phi,
                                            const MomentumLattice& lat) {
  std::array<ChargeDensity, 3> g;
  for (int c = 0; c < 3; ++c) {
    g[c] = phi;
    for (int i = 0; i < phi.size(); ++i) {
      const Vector3r q = lat.diff_momentum(i);
      g[c].coeff[i] = Complex(0.0, 1.0) * q[c] * phi.coeff[i];
    }
  }
  return g;
}

MatrixXc dressed_dirac(Real mj, Real e, const EMPotential& pot, const MomentumLattice& lat) {
  const DiracMatrices& dm = dirac_matrices();
  MatrixXc d = free_dirac_operator(lat, mj);
  if (e == 0.0) return d;
  const int mc = lat.mode_count();
  for (int a = 0; a < mc; ++a)
    for (int b = 0; b < mc; ++b) {
      const int idx = lat.diff_index(lat.mode(a) - lat.mode(b));
      const Complex v = pot.V.coeff[idx];
      Matrix4c block = v * Matrix4c::Identity();
      for (int c = 0; c < 3; ++c) block += pot.A[c].coeff[idx] * dm.alpha(c);
      d.block<4, 4>(4 * a, 4 * b) -= e * block;
    }
  return d;
}

namespace {

struct MassTerm {
  Real abs_trace;  // tr |D| at this mass
  MatrixXc neg_projector;
};

MassTerm diagonalize_mass(Real mj, Real e, const EMPotential& pot, const MomentumLattice& lat) {
  const MatrixXc d = dressed_dirac(mj, e, pot, lat);
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(d);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  MassTerm t;
  t.abs_trace = es.eigenvalues().cwiseAbs().sum();
  const int n_neg = static_cast<int>((es.eigenvalues().array() < 0.0).count());
  const auto occ = es.eigenvectors().leftCols(n_neg);
  t.neg_projector = occ * occ.adjoint();
  return t;
}

/// The three mass terms are independent; run them on separate threads.
std::array<MassTerm, 3> mass_terms(const EMPotential& pot, Real e, const PVSetup& pv,
                                   const MomentumLattice& lat) {
  std::array<std::future<MassTerm>, 3> fut;
  for (int j = 0; j < 3; ++j)
    fut[j] = std::async(std::launch::async, [&, j] {
      return diagonalize_mass(pv.mass(j), e, pot, lat);
    });
  return {fut[0].get(), fut[1].get(), fut[2].get()};
}

Real free_abs_trace(Real mj, const MomentumLattice& lat) {
  Real sum = 0.0;
  for (int a = 0; a < lat.mode_count(); ++a)
    sum += 4.0 * std::sqrt(lat.momentum(a).squaredNorm() + mj * mj);
  return sum;
}

}  // namespace

Real pv_trace_term(const EMPotential& pot, Real e, const PVSetup& pv,
                   const MomentumLattice& lat) {
  const auto terms = mass_terms(pot, e, pv, lat);
  Real sum = 0.0;
  for (int j = 0; j < 3; ++j)
    sum += pv.coeff(j) * (free_abs_trace(pv.mass(j), lat) - terms[j].abs_trace);
  return 0.5 * sum;
}

Real field_energy(const EMPotential& pot, const MomentumLattice& lat) {
  Real curl2 = 0.0, grad2 = 0.0;
  for (int i = 0; i < pot.V.size(); ++i) {
    const Vector3r q = lat.diff_momentum(i);
    Eigen::Vector3cd a(pot.A[0].coeff[i], pot.A[1].coeff[i], pot.A[2].coeff[i]);
    curl2 += q.cast<Complex>().cross(a).squaredNorm();
    grad2 += q.squaredNorm() * std::norm(pot.V.coeff[i]);
  }
  return lat.volume() / (8.0 * kPi) * (curl2 - grad2);
}

Real pv_lagrangian(const EMPotential& pot, const EMPotential& pot_ext, Real e,
                   const PVSetup& pv, const MomentumLattice& lat) {
  return pv_trace_term(pot + pot_ext, e, pv, lat) + field_energy(pot, lat);
}

namespace {

struct Densities {
  ChargeDensity rho;
  CurrentDensity j;
  Real lagrangian;
};

/// Densities of the coefficient-weighted negative projectors at the total
/// potential, plus the Lagrangian value from the same decompositions.
Densities pv_densities(const EMPotential& pot, const EMPotential& pot_ext, Real e,
                       const PVSetup& pv, const MomentumLattice& lat) {
  const auto terms = mass_terms(pot + pot_ext, e, pv, lat);
  MatrixXc q = MatrixXc::Zero(lat.dim(), lat.dim());
  Real trace_term = 0.0;
  for (int j = 0; j < 3; ++j) {
    q += pv.coeff(j) * terms[j].neg_projector;
    trace_term += pv.coeff(j) * (free_abs_trace(pv.mass(j), lat) - terms[j].abs_trace);
  }
  Densities d{density(q, lat), current(q, lat), 0.5 * trace_term + field_energy(pot, lat)};
  return d;
}

Real grad_norm_v(const ChargeDensity& v, const ChargeDensity& rho, Real e,
                 const MomentumLattice& lat) {
  Real sum = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const Real q2 = lat.diff_momentum(i).squaredNorm();
    if (q2 == 0.0) continue;
    sum += std::norm(q2 * v.coeff[i] + 4.0 * kPi * e * rho.coeff[i]);
  }
  return std::sqrt(sum);
}

Real grad_norm_a(const std::array<ChargeDensity, 3>& a, const CurrentDensity& j, Real e,
                 const MomentumLattice& lat) {
  Real sum = 0.0;
  for (int i = 0; i < a[0].size(); ++i) {
    const Vector3r qv = lat.diff_momentum(i);
    const Real q2 = qv.squaredNorm();
    if (q2 == 0.0) continue;
    Eigen::Vector3cd jt(j.component[0].coeff[i], j.component[1].coeff[i],
                        j.component[2].coeff[i]);
    jt -= (qv.cast<Complex>().dot(jt) / q2) * qv.cast<Complex>();
    for (int c = 0; c < 3; ++c)
      sum += std::norm(q2 * a[c].coeff[i] - 4.0 * kPi * e * jt[c]);
  }
  return std::sqrt(sum);
}

Real curl_seminorm(const std::array<ChargeDensity, 3>& comps, const MomentumLattice& lat) {
  Real sum = 0.0;
  for (int i = 0; i < comps[0].size(); ++i) {
    const Vector3r q = lat.diff_momentum(i);
    const Eigen::Vector3cd a(comps[0].coeff[i], comps[1].coeff[i], comps[2].coeff[i]);
    sum += q.cast<Complex>().cross(a).squaredNorm();
  }
  return std::sqrt(lat.volume() * sum);
}

Real grad_v_seminorm(const ChargeDensity& v, const MomentumLattice& lat) {
  Real sum = 0.0;
  for (int i = 0; i < v.size(); ++i)
    sum += lat.diff_momentum(i).squaredNorm() * std::norm(v.coeff[i]);
  return std::sqrt(lat.volume() * sum);
}

}  // namespace

SaddleResult saddle_solve(const EMPotential& pot_ext, Real e, const PVSetup& pv,
                          const SaddleConfig& cfg, const MomentumLattice& lat) {
  const Real ball = e > 0.0 ? cfg.radius * std::sqrt(pv.m0) / e
                            : std::numeric_limits<Real>::infinity();
  EMPotential pot = EMPotential::zero(lat);
  SaddleResult out;
  int stalled = 0;

  for (int it = 0; it < cfg.max_outer; ++it) {
    const Densities d = pv_densities(pot, pot_ext, e, pv, lat);
    const Real gv = grad_norm_v(pot.V, d.rho, e, lat);
    const Real ga = grad_norm_a(pot.A, d.j, e, lat);
    out.trace.push_back({it, d.lagrangian, gv, ga});
    out.iterations = it;
    if (gv <= cfg.tol && ga <= cfg.tol) {
      out.pot = pot;
      return out;
    }

    // Preconditioned ascent in V toward |q|^2 V = -4 pi e rho, descent in A
    // toward |q|^2 A = 4 pi e j_T.
    for (int i = 0; i < pot.V.size(); ++i) {
      const Real q2 = lat.diff_momentum(i).squaredNorm();
      if (q2 == 0.0) continue;
      pot.V.coeff[i] += cfg.step_v * (-pot.V.coeff[i] - 4.0 * kPi * e * d.rho.coeff[i] / q2);
      for (int c = 0; c < 3; ++c)
        pot.A[c].coeff[i] +=
            cfg.step_a * (-pot.A[c].coeff[i] + 4.0 * kPi * e * d.j.component[c].coeff[i] / q2);
    }
    transverse_project(pot.A, lat);

    bool hit = false;
    const Real nv = grad_v_seminorm(pot.V, lat);
    if (nv > ball) {
      pot.V = (ball / nv) * pot.V;
      hit = true;
    }
    const Real na = curl_seminorm(pot.A, lat);
    if (na > ball) {
      for (int c = 0; c < 3; ++c) pot.A[c] = (ball / na) * pot.A[c];
      hit = true;
    }
    stalled = hit ? stalled + 1 : 0;
    if (stalled >= cfg.stall_limit)
      throw Error(ErrorCode::BoundaryStall,
                  "iterate pinned to the constraint ball; outside the interior regime");
  }
  throw Error(ErrorCode::MaxOuterExceeded, "saddle iteration did not reach tolerance");
}

std::pair<Real, Real> pv_residuals(const EMPotential& pot_star, const EMPotential& pot_ext,
                                   Real e, const PVSetup& pv, const MomentumLattice& lat) {
  const Densities d = pv_densities(pot_star, pot_ext, e, pv, lat);
  return {grad_norm_v(pot_star.V, d.rho, e, lat), grad_norm_a(pot_star.A, d.j, e, lat)};
}

}  // namespace vacpol
