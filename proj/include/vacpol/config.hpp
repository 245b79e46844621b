#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vacpol/pauli_villars.hpp"
#include "vacpol/scf.hpp"

namespace vacpol {

/// Fully validated run description parsed from the key/value configuration
/// grammar (`section.key = value`, `#` comments). Unknown keys are rejected
/// and every range check names the offending key.
struct RunConfig {
  std::string command;  // solve | solve-charged | renorm | pv-saddle | expand

  Real lattice_L = 2.0 * kPi;
  int lattice_N = 2;
  Real lattice_Lambda = 2.2;

  Real m = 1.0;
  std::optional<Real> alpha;     // bare coupling
  std::optional<Real> alpha_ph;  // physical coupling, converted through B(Lambda/m)
  Real alpha_resolved = 0.0;     // bare coupling after conversion
  Real e = 0.1;

  std::string nu_profile = "none";  // none | gaussian | point-pair | file
  Real nu_Z = 1.0;
  Real nu_sigma = 0.5;
  Real nu_amplitude = 1.0;
  Vector3i nu_mode = Vector3i(1, 0, 0);
  std::string nu_path;

  SCFConfig scf;
  std::optional<Real> charge;  // target for solve-charged

  std::vector<Real> renorm_ratios = {10.0, 100.0, 1000.0};
  std::vector<Real> renorm_alphas = {0.05, 0.1, 0.2};
  bool renorm_screening = false;

  int expand_order = 2;
  std::vector<Real> expand_samples = {0.02, 0.03, 0.04, 0.05};
  std::string expand_conversion = "none";  // none | continuum

  Real pv_m1 = 2.0;
  Real pv_m2 = 3.0;
  SaddleConfig saddle;
  std::string pvext_profile = "none";  // none | v-gaussian | file
  Real pvext_amplitude = 0.05;
  Real pvext_sigma = 1.0;
  std::string pvext_path;

  /// Every key with its final value, in canonical order; embedded in result
  /// files as the reproducibility header.
  std::vector<std::pair<std::string, std::string>> resolved;
};

/// Parse and validate configuration text. `overrides` are key=value pairs
/// applied after the file content (used by sweeps). Throws ParseError,
/// ValidationError, or Error(LandauPoleViolation) when a physical coupling
/// cannot be converted at the configured cutoff.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Built-in probe density for the configured profile.
ChargeDensity build_nu(const RunConfig& cfg, const MomentumLattice& lat);

/// External electromagnetic potential for pv-saddle runs.
EMPotential build_pv_external(const RunConfig& cfg, const MomentumLattice& lat);

}  // namespace vacpol
