#include "vacpol/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "vacpol/errors.hpp"
#include "vacpol/io.hpp"
#include "vacpol/renorm.hpp"

namespace vacpol {

namespace {

struct RawEntry {
  std::string value;
  int line;
  bool used = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Extractor {
 public:
  explicit Extractor(std::map<std::string, RawEntry>& raw) : raw_(raw) {}

  bool has(const std::string& key) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return false;
    it->second.used = true;
    return true;
  }

  std::string str(const std::string& key, const std::string& fallback) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    it->second.used = true;
    return it->second.value;
  }

  Real real(const std::string& key, Real fallback) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    it->second.used = true;
    return parse_real(key, it->second.value);
  }

  int integer(const std::string& key, int fallback) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    it->second.used = true;
    try {
      std::size_t pos = 0;
      const int v = std::stoi(it->second.value, &pos);
      if (pos != it->second.value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ValidationError(key, "not an integer: " + it->second.value);
    }
  }

  bool boolean(const std::string& key, bool fallback) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    it->second.used = true;
    if (it->second.value == "true" || it->second.value == "on") return true;
    if (it->second.value == "false" || it->second.value == "off") return false;
    throw ValidationError(key, "not a boolean: " + it->second.value);
  }

  std::vector<Real> real_list(const std::string& key, const std::vector<Real>& fallback) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    it->second.used = true;
    std::vector<Real> out;
    std::stringstream ss(it->second.value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
    if (out.empty()) throw ValidationError(key, "empty list");
    return out;
  }

  Vector3i mode(const std::string& key, const Vector3i& fallback) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    it->second.used = true;
    std::vector<int> v;
    std::stringstream ss(it->second.value);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(static_cast<int>(parse_real(key, trim(item))));
    if (v.size() != 3) throw ValidationError(key, "expected three comma-separated integers");
    return Vector3i(v[0], v[1], v[2]);
  }

 private:
  static Real parse_real(const std::string& key, const std::string& s) {
    try {
      std::size_t pos = 0;
      const Real v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ValidationError(key, "not a number: " + s);
    }
  }

  std::map<std::string, RawEntry>& raw_;
};

std::string list_to_string(const std::vector<Real>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + format_json_real(v[i]);
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, RawEntry> raw;

  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (value.empty()) throw ParseError(line_no, "empty value for " + key);
    raw[key] = RawEntry{value, line_no};
  }
  for (const auto& [key, value] : overrides) raw[key] = RawEntry{value, 0};

  Extractor x(raw);
  RunConfig cfg;

  cfg.command = x.str("run.command", "");
  const bool known_command = cfg.command == "solve" || cfg.command == "solve-charged" ||
                             cfg.command == "renorm" || cfg.command == "pv-saddle" ||
                             cfg.command == "expand";
  if (!known_command)
    throw ValidationError("run.command",
                          cfg.command.empty() ? "missing" : "unknown command " + cfg.command);

  cfg.lattice_L = x.real("lattice.L", cfg.lattice_L);
  cfg.lattice_N = x.integer("lattice.N", cfg.lattice_N);
  cfg.lattice_Lambda = x.real("lattice.Lambda", cfg.lattice_Lambda);
  if (cfg.lattice_L <= 0.0) throw ValidationError("lattice.L", "must be positive");
  if (cfg.lattice_N < 0) throw ValidationError("lattice.N", "must be non-negative");
  if (cfg.lattice_Lambda <= 0.0) throw ValidationError("lattice.Lambda", "must be positive");

  cfg.m = x.real("physics.m", cfg.m);
  if (cfg.m <= 0.0) throw ValidationError("physics.m", "must be positive");
  if (x.has("physics.alpha")) cfg.alpha = x.real("physics.alpha", 0.0);
  if (x.has("physics.alpha_ph")) cfg.alpha_ph = x.real("physics.alpha_ph", 0.0);
  if (cfg.alpha && cfg.alpha_ph)
    throw ValidationError("physics.alpha", "give either alpha or alpha_ph, not both");
  if (cfg.alpha && *cfg.alpha < 0.0) throw ValidationError("physics.alpha", "must be >= 0");
  if (cfg.alpha_ph && *cfg.alpha_ph < 0.0)
    throw ValidationError("physics.alpha_ph", "must be >= 0");
  cfg.e = x.real("physics.e", cfg.e);
  if (cfg.e < 0.0) throw ValidationError("physics.e", "must be >= 0");

  cfg.nu_profile = x.str("nu.profile", cfg.nu_profile);
  if (cfg.nu_profile != "none" && cfg.nu_profile != "gaussian" &&
      cfg.nu_profile != "point-pair" && cfg.nu_profile != "file")
    throw ValidationError("nu.profile", "unknown profile " + cfg.nu_profile);
  cfg.nu_Z = x.real("nu.Z", cfg.nu_Z);
  cfg.nu_sigma = x.real("nu.sigma", cfg.nu_sigma);
  cfg.nu_amplitude = x.real("nu.amplitude", cfg.nu_amplitude);
  cfg.nu_mode = x.mode("nu.mode", cfg.nu_mode);
  cfg.nu_path = x.str("nu.path", "");
  if (cfg.nu_profile == "file" && cfg.nu_path.empty())
    throw ValidationError("nu.path", "required for nu.profile = file");
  if (cfg.nu_profile != "file" && !cfg.nu_path.empty())
    throw ValidationError("nu.path", "only valid with nu.profile = file");
  if (cfg.nu_profile == "gaussian" && cfg.nu_sigma <= 0.0)
    throw ValidationError("nu.sigma", "must be positive");
  if (cfg.nu_profile == "point-pair" && cfg.nu_mode == Vector3i::Zero())
    throw ValidationError("nu.mode", "must be a nonzero mode");

  cfg.scf.mixing = x.real("scf.mixing", cfg.scf.mixing);
  cfg.scf.tol = x.real("scf.tol", cfg.scf.tol);
  cfg.scf.max_iter = x.integer("scf.max_iter", cfg.scf.max_iter);
  cfg.scf.kernel_eps = x.real("scf.kernel_eps", cfg.scf.kernel_eps);
  cfg.scf.mu_lo = x.real("scf.mu_lo", cfg.scf.mu_lo);
  cfg.scf.mu_hi = x.real("scf.mu_hi", cfg.scf.mu_hi);
  cfg.scf.charge_tol = x.real("scf.charge_tol", cfg.scf.charge_tol);
  if (!(cfg.scf.mixing > 0.0 && cfg.scf.mixing <= 1.0))
    throw ValidationError("scf.mixing", "must lie in (0, 1]");
  if (cfg.scf.tol <= 0.0) throw ValidationError("scf.tol", "must be positive");
  if (cfg.scf.max_iter < 1) throw ValidationError("scf.max_iter", "must be >= 1");
  if (cfg.scf.kernel_eps <= 0.0) throw ValidationError("scf.kernel_eps", "must be positive");
  if (!(cfg.scf.mu_lo < cfg.scf.mu_hi && cfg.scf.mu_lo > -1.0 && cfg.scf.mu_hi < 1.0))
    throw ValidationError("scf.mu_lo", "bracket must satisfy -1 < lo < hi < 1 (units of m)");
  if (x.has("scf.charge")) cfg.charge = x.real("scf.charge", 0.0);
  if (cfg.command == "solve-charged" && !cfg.charge)
    throw ValidationError("scf.charge", "required for solve-charged");

  cfg.renorm_ratios = x.real_list("renorm.ratios", cfg.renorm_ratios);
  cfg.renorm_alphas = x.real_list("renorm.alphas", cfg.renorm_alphas);
  cfg.renorm_screening = x.boolean("renorm.screening", cfg.renorm_screening);
  for (Real r : cfg.renorm_ratios)
    if (r <= 0.0) throw ValidationError("renorm.ratios", "ratios must be positive");
  for (Real a : cfg.renorm_alphas)
    if (a <= 0.0) throw ValidationError("renorm.alphas", "couplings must be positive");

  cfg.expand_order = x.integer("expand.order", cfg.expand_order);
  cfg.expand_samples = x.real_list("expand.samples", cfg.expand_samples);
  cfg.expand_conversion = x.str("expand.conversion", cfg.expand_conversion);
  if (cfg.expand_order < 1) throw ValidationError("expand.order", "must be >= 1");
  if (static_cast<int>(cfg.expand_samples.size()) < cfg.expand_order + 2)
    throw ValidationError("expand.samples", "need at least order + 2 samples");
  if (cfg.expand_conversion != "none" && cfg.expand_conversion != "continuum")
    throw ValidationError("expand.conversion", "must be none or continuum");

  cfg.pv_m1 = x.real("pv.m1", cfg.pv_m1);
  cfg.pv_m2 = x.real("pv.m2", cfg.pv_m2);
  cfg.saddle.radius = x.real("pv.radius", cfg.saddle.radius);
  cfg.saddle.step_v = x.real("pv.step_v", cfg.saddle.step_v);
  cfg.saddle.step_a = x.real("pv.step_a", cfg.saddle.step_a);
  cfg.saddle.tol = x.real("pv.tol", cfg.saddle.tol);
  cfg.saddle.max_outer = x.integer("pv.max_outer", cfg.saddle.max_outer);
  if (cfg.command == "pv-saddle") {
    if (cfg.pv_m1 <= cfg.m || cfg.pv_m2 <= cfg.m)
      throw ValidationError("pv.m1", "regulator masses must exceed physics.m");
    if (cfg.pv_m1 == cfg.pv_m2) throw ValidationError("pv.m2", "regulator masses must differ");
  }
  if (cfg.saddle.radius <= 0.0) throw ValidationError("pv.radius", "must be positive");
  if (!(cfg.saddle.step_v > 0.0 && cfg.saddle.step_v <= 1.0))
    throw ValidationError("pv.step_v", "must lie in (0, 1]");
  if (!(cfg.saddle.step_a > 0.0 && cfg.saddle.step_a <= 1.0))
    throw ValidationError("pv.step_a", "must lie in (0, 1]");
  if (cfg.saddle.tol <= 0.0) throw ValidationError("pv.tol", "must be positive");
  if (cfg.saddle.max_outer < 1) throw ValidationError("pv.max_outer", "must be >= 1");

  cfg.pvext_profile = x.str("pvext.profile", cfg.pvext_profile);
  cfg.pvext_amplitude = x.real("pvext.amplitude", cfg.pvext_amplitude);
  cfg.pvext_sigma = x.real("pvext.sigma", cfg.pvext_sigma);
  cfg.pvext_path = x.str("pvext.path", "");
  if (cfg.pvext_profile != "none" && cfg.pvext_profile != "v-gaussian" &&
      cfg.pvext_profile != "file")
    throw ValidationError("pvext.profile", "unknown profile " + cfg.pvext_profile);
  if (cfg.pvext_profile == "file" && cfg.pvext_path.empty())
    throw ValidationError("pvext.path", "required for pvext.profile = file");

  for (const auto& [key, entry] : raw)
    if (!entry.used) throw ValidationError(key, "unknown key");

  // Commands that actually run the vacuum solver need one coupling source.
  const bool needs_coupling = cfg.command == "solve" || cfg.command == "solve-charged";
  if (needs_coupling && !cfg.alpha && !cfg.alpha_ph)
    throw ValidationError("physics.alpha", "required for " + cfg.command);

  if (cfg.alpha_ph) {
    const Real B = b_constant(cfg.lattice_Lambda / cfg.m);
    cfg.alpha_resolved = bare_coupling(*cfg.alpha_ph, B);
  } else if (cfg.alpha) {
    cfg.alpha_resolved = *cfg.alpha;
  }

  auto add = [&cfg](const std::string& k, const std::string& v) {
    cfg.resolved.emplace_back(k, v);
  };
  add("run.command", cfg.command);
  add("lattice.L", format_json_real(cfg.lattice_L));
  add("lattice.N", std::to_string(cfg.lattice_N));
  add("lattice.Lambda", format_json_real(cfg.lattice_Lambda));
  add("physics.m", format_json_real(cfg.m));
  if (cfg.alpha_ph) add("physics.alpha_ph", format_json_real(*cfg.alpha_ph));
  add("physics.alpha", format_json_real(cfg.alpha_resolved));
  add("physics.e", format_json_real(cfg.e));
  add("nu.profile", cfg.nu_profile);
  add("nu.Z", format_json_real(cfg.nu_Z));
  add("nu.sigma", format_json_real(cfg.nu_sigma));
  add("nu.amplitude", format_json_real(cfg.nu_amplitude));
  add("nu.mode", std::to_string(cfg.nu_mode.x()) + "," + std::to_string(cfg.nu_mode.y()) + "," +
                     std::to_string(cfg.nu_mode.z()));
  if (!cfg.nu_path.empty()) add("nu.path", cfg.nu_path);
  add("scf.mixing", format_json_real(cfg.scf.mixing));
  add("scf.tol", format_json_real(cfg.scf.tol));
  add("scf.max_iter", std::to_string(cfg.scf.max_iter));
  add("scf.kernel_eps", format_json_real(cfg.scf.kernel_eps));
  add("scf.mu_lo", format_json_real(cfg.scf.mu_lo));
  add("scf.mu_hi", format_json_real(cfg.scf.mu_hi));
  add("scf.charge_tol", format_json_real(cfg.scf.charge_tol));
  if (cfg.charge) add("scf.charge", format_json_real(*cfg.charge));
  add("renorm.ratios", list_to_string(cfg.renorm_ratios));
  add("renorm.alphas", list_to_string(cfg.renorm_alphas));
  add("renorm.screening", cfg.renorm_screening ? "true" : "false");
  add("expand.order", std::to_string(cfg.expand_order));
  add("expand.samples", list_to_string(cfg.expand_samples));
  add("expand.conversion", cfg.expand_conversion);
  add("pv.m1", format_json_real(cfg.pv_m1));
  add("pv.m2", format_json_real(cfg.pv_m2));
  add("pv.radius", format_json_real(cfg.saddle.radius));
  add("pv.step_v", format_json_real(cfg.saddle.step_v));
  add("pv.step_a", format_json_real(cfg.saddle.step_a));
  add("pv.tol", format_json_real(cfg.saddle.tol));
  add("pv.max_outer", std::to_string(cfg.saddle.max_outer));
  add("pvext.profile", cfg.pvext_profile);
  add("pvext.amplitude", format_json_real(cfg.pvext_amplitude));
  add("pvext.sigma", format_json_real(cfg.pvext_sigma));
  if (!cfg.pvext_path.empty()) add("pvext.path", cfg.pvext_path);

  return cfg;
}

ChargeDensity build_nu(const RunConfig& cfg, const MomentumLattice& lat) {
  if (cfg.nu_profile == "none") return ChargeDensity::zero(lat);
  if (cfg.nu_profile == "gaussian") {
    ChargeDensity nu = ChargeDensity::zero(lat);
    const Real norm = cfg.nu_Z / lat.volume();
    for (int i = 0; i < nu.size(); ++i) {
      const Real q2 = lat.diff_momentum(i).squaredNorm();
      nu.coeff[i] = norm * std::exp(-0.5 * cfg.nu_sigma * cfg.nu_sigma * q2);
    }
    return nu;
  }
  if (cfg.nu_profile == "point-pair") {
    ChargeDensity nu = ChargeDensity::zero(lat);
    if (!lat.diff_contains(cfg.nu_mode))
      throw ValidationError("nu.mode", "mode outside the difference grid");
    nu.coeff[lat.diff_index(cfg.nu_mode)] = cfg.nu_amplitude;
    nu.coeff[lat.diff_index(Vector3i(-cfg.nu_mode))] = cfg.nu_amplitude;
    return nu;
  }
  return read_density(cfg.nu_path, lat);
}

EMPotential build_pv_external(const RunConfig& cfg, const MomentumLattice& lat) {
  if (cfg.pvext_profile == "none") return EMPotential::zero(lat);
  if (cfg.pvext_profile == "v-gaussian") {
    ChargeDensity v = ChargeDensity::zero(lat);
    for (int i = 0; i < v.size(); ++i) {
      const Real q2 = lat.diff_momentum(i).squaredNorm();
      v.coeff[i] = cfg.pvext_amplitude * std::exp(-0.5 * cfg.pvext_sigma * cfg.pvext_sigma * q2);
    }
    auto zero3 = std::array<ChargeDensity, 3>{ChargeDensity::zero(lat), ChargeDensity::zero(lat),
                                              ChargeDensity::zero(lat)};
    return make_em_potential(v, zero3, lat);
  }
  // file: scalar density file interpreted as the V component
  ChargeDensity v = read_density(cfg.pvext_path, lat);
  auto zero3 = std::array<ChargeDensity, 3>{ChargeDensity::zero(lat), ChargeDensity::zero(lat),
                                            ChargeDensity::zero(lat)};
  return make_em_potential(v, zero3, lat);
}

}  // namespace vacpol
