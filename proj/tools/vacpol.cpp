// Batch front end: parses a run configuration, dispatches one solver
// command, and writes result tables and plot-ready data files.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vacpol/config.hpp"
#include "vacpol/errors.hpp"
#include "vacpol/io.hpp"
#include "vacpol/renorm.hpp"

namespace fs = std::filesystem;
using namespace vacpol;

namespace {

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::MaxIterExceeded: return 2;
    case ErrorCode::Degenerate: return 3;
    case ErrorCode::ChargeUnreachable: return 4;
    case ErrorCode::LandauPoleViolation: return 5;
    case ErrorCode::NonlinearRegime: return 6;
    case ErrorCode::FitIllConditioned: return 7;
    case ErrorCode::MaxOuterExceeded: return 8;
    case ErrorCode::BoundaryStall: return 8;
    case ErrorCode::DegenerateMasses: return 9;
    default: return 1;
  }
}

void log_event(const fs::path& dir, const std::string& level, const std::string& code,
               const std::string& message) {
  std::ofstream os(dir / "log.jsonl", std::ios::app | std::ios::binary);
  JsonWriter w(os);
  w.begin_object();
  w.key("level").value(level);
  w.key("code").value(code);
  w.key("message").value(message);
  w.end_object();
  os << '\n';
}

void emit_config(JsonWriter& w, const RunConfig& cfg) {
  w.key("config").begin_object();
  for (const auto& [k, v] : cfg.resolved) w.key(k).value(v);
  w.end_object();
}

void emit_density_entries(JsonWriter& w, const ChargeDensity& rho, const MomentumLattice& lat) {
  w.begin_array();
  for (int i = 0; i < rho.size(); ++i) {
    const Complex c = rho.coeff[i];
    if (c == Complex(0.0, 0.0)) continue;
    const Vector3i d = lat.diff_vector(i);
    w.begin_array();
    w.value(d.x()).value(d.y()).value(d.z()).value(c.real()).value(c.imag());
    w.end_array();
  }
  w.end_array();
}

void write_scf_outputs(const fs::path& out, const RunConfig& cfg, const SCFResult& r,
                       const MomentumLattice& lat) {
  {
    std::ofstream os(out / "result.json", std::ios::binary);
    JsonWriter w(os);
    w.begin_object();
    w.key("command").value(cfg.command);
    emit_config(w, cfg);
    w.key("energy").value(r.energy);
    w.key("iterations").value(r.iterations);
    w.key("mu").value(r.mu);
    w.key("degenerate").value(r.degenerate);
    w.key("charge").value(r.charge);
    w.key("final_residual").value(r.residual_history.empty() ? 0.0 : r.residual_history.back());
    w.key("residual_history").begin_array();
    for (Real res : r.residual_history) w.value(res);
    w.end_array();
    w.end_object();
    os << '\n';
  }
  std::vector<std::vector<Real>> rows;
  for (std::size_t i = 0; i < r.residual_history.size(); ++i)
    rows.push_back({static_cast<Real>(i + 1), r.residual_history[i]});
  write_csv((out / "residuals.csv").string(), {"iteration", "residual"}, rows);
  write_checkpoint((out / "checkpoint.bin").string(), r.state, lat,
                   {r.mu, r.iterations});
  write_density((out / "density.json").string(), r.density, lat);
}

int run_solve(const RunConfig& cfg, const fs::path& out, const std::string& resume) {
  const MomentumLattice lat = build_lattice(cfg.lattice_L, cfg.lattice_N, cfg.lattice_Lambda);
  const ChargeDensity nu = build_nu(cfg, lat);
  std::optional<ChargeDensity> rho0;
  if (!resume.empty()) {
    const VacuumState prev = read_checkpoint(resume, lat);
    if (std::abs(prev.m - cfg.m) > 1e-12)
      throw ValidationError("checkpoint", "checkpoint mass does not match physics.m");
    rho0 = density(prev, lat);
  }
  SCFResult r;
  if (cfg.command == "solve-charged")
    r = scf_solve_charged(nu, cfg.alpha_resolved, *cfg.charge, cfg.scf, lat, cfg.m, rho0);
  else
    r = scf_solve(nu, cfg.alpha_resolved, cfg.scf, lat, cfg.m, rho0);
  write_scf_outputs(out, cfg, r, lat);
  return 0;
}

int run_renorm(const RunConfig& cfg, const fs::path& out) {
  std::vector<std::vector<Real>> b_rows;
  for (Real r : cfg.renorm_ratios) {
    const Real b = b_constant(r);
    const Real ba = b_asymptotic(r);
    b_rows.push_back({r, b, ba, (b - ba) * r * r});
  }
  write_csv((out / "b_table.csv").string(), {"ratio", "B", "B_asymptotic", "diff_ratio2"},
            b_rows);

  std::vector<std::vector<Real>> landau_rows;
  for (Real a : cfg.renorm_alphas) {
    const LandauCutoff lc = landau_cutoff(a, cfg.m);
    landau_rows.push_back({a, lc.exact, lc.asymptotic});
  }
  write_csv((out / "landau_table.csv").string(), {"alpha_ph", "Lambda_exact", "Lambda_asymptotic"},
            landau_rows);

  Real b_lat = 0.0;
  if (cfg.renorm_screening) {
    const MomentumLattice lat = build_lattice(cfg.lattice_L, cfg.lattice_N, cfg.lattice_Lambda);
    const ChargeDensity nu = build_nu(cfg, lat);
    const Real alpha = cfg.alpha_resolved;
    const ResponseResult resp = lattice_response_constant(nu, alpha, lat, cfg.m, cfg.scf);
    b_lat = resp.b_lat;
    std::vector<std::vector<Real>> rows;
    for (Real a : {alpha, 0.5 * alpha}) {
      const SCFResult r = scf_solve(nu, a, cfg.scf, lat, cfg.m);
      const ChargeIdentityReport rep = verify_charge_identity(r, nu, a, b_lat, lat);
      rows.push_back({a, rep.screening_lhs, rep.screening_rhs, rep.rel_dev});
    }
    write_csv((out / "screening.csv").string(),
              {"alpha", "screening_lhs", "screening_rhs", "rel_dev"}, rows);
  }

  std::ofstream os(out / "result.json", std::ios::binary);
  JsonWriter w(os);
  w.begin_object();
  w.key("command").value(cfg.command);
  emit_config(w, cfg);
  w.key("b_table_rows").value(static_cast<int>(b_rows.size()));
  w.key("landau_rows").value(static_cast<int>(landau_rows.size()));
  if (cfg.renorm_screening) w.key("b_lat").value(b_lat);
  w.end_object();
  os << '\n';
  return 0;
}

int run_expand(const RunConfig& cfg, const fs::path& out) {
  const MomentumLattice lat = build_lattice(cfg.lattice_L, cfg.lattice_N, cfg.lattice_Lambda);
  const ChargeDensity nu = build_nu(cfg, lat);
  const Real conv =
      cfg.expand_conversion == "continuum" ? b_constant(cfg.lattice_Lambda / cfg.m) : 0.0;
  const ExpansionFit fit = dressed_density_expansion(nu, cfg.expand_samples, cfg.expand_order,
                                                     lat, cfg.m, cfg.scf, conv);
  {
    std::ofstream os(out / "expansion.json", std::ios::binary);
    JsonWriter w(os);
    w.begin_object();
    w.key("format").value("vacpol-expansion-v1");
    emit_config(w, cfg);
    w.key("order").value(cfg.expand_order);
    w.key("conversion_B").value(fit.conversion_B);
    w.key("samples").begin_array();
    for (Real s : fit.samples) w.value(s);
    w.end_array();
    w.key("residuals").begin_array();
    for (Real r : fit.residuals) w.value(r);
    w.end_array();
    w.key("leading");
    emit_density_entries(w, fit.leading, lat);
    w.key("nu_k").begin_array();
    for (const auto& nk : fit.nu_k) emit_density_entries(w, nk, lat);
    w.end_array();
    w.end_object();
    os << '\n';
  }
  std::ofstream os(out / "result.json", std::ios::binary);
  JsonWriter w(os);
  w.begin_object();
  w.key("command").value(cfg.command);
  emit_config(w, cfg);
  w.key("order").value(cfg.expand_order);
  w.key("max_residual").value(*std::max_element(fit.residuals.begin(), fit.residuals.end()));
  w.end_object();
  os << '\n';
  return 0;
}

int run_pv_saddle(const RunConfig& cfg, const fs::path& out) {
  const MomentumLattice lat = build_lattice(cfg.lattice_L, cfg.lattice_N, cfg.lattice_Lambda);
  const PVSetup pv = make_pv_setup(cfg.m, cfg.pv_m1, cfg.pv_m2);
  const EMPotential pot_ext = build_pv_external(cfg, lat);
  const SaddleResult sr = saddle_solve(pot_ext, cfg.e, pv, cfg.saddle, lat);
  const auto [res_v, res_a] = pv_residuals(sr.pot, pot_ext, cfg.e, pv, lat);

  std::vector<std::vector<Real>> rows;
  for (const auto& t : sr.trace)
    rows.push_back({static_cast<Real>(t.iteration), t.lagrangian, t.grad_v, t.grad_a});
  write_csv((out / "saddle_trace.csv").string(),
            {"iteration", "lagrangian", "grad_v", "grad_a"}, rows);

  {
    std::ofstream os(out / "potential.json", std::ios::binary);
    JsonWriter w(os);
    w.begin_object();
    w.key("format").value("vacpol-potential-v1");
    emit_config(w, cfg);
    w.key("lattice").begin_object();
    w.key("L").value(lat.box_length());
    w.key("N").value(lat.max_index());
    w.key("Lambda").value(lat.cutoff());
    w.end_object();
    w.key("V");
    emit_density_entries(w, sr.pot.V, lat);
    for (int c = 0; c < 3; ++c) {
      w.key("A" + std::to_string(c + 1));
      emit_density_entries(w, sr.pot.A[c], lat);
    }
    w.end_object();
    os << '\n';
  }

  std::ofstream os(out / "result.json", std::ios::binary);
  JsonWriter w(os);
  w.begin_object();
  w.key("command").value(cfg.command);
  emit_config(w, cfg);
  w.key("iterations").value(sr.iterations);
  w.key("lagrangian").value(sr.trace.empty() ? 0.0 : sr.trace.back().lagrangian);
  w.key("residual_rho").value(res_v);
  w.key("residual_j").value(res_a);
  w.key("potential_norm").value(std::sqrt(sr.pot.V.coeff.squaredNorm() +
                                          sr.pot.A[0].coeff.squaredNorm() +
                                          sr.pot.A[1].coeff.squaredNorm() +
                                          sr.pot.A[2].coeff.squaredNorm()));
  w.end_object();
  os << '\n';
  return 0;
}

int run_one(const std::string& config_text,
            const std::vector<std::pair<std::string, std::string>>& overrides,
            const fs::path& out, const std::string& resume) {
  fs::create_directories(out);
  try {
    const RunConfig cfg = parse_config(config_text, overrides);
    if (cfg.command == "solve" || cfg.command == "solve-charged")
      return run_solve(cfg, out, resume);
    if (cfg.command == "renorm") return run_renorm(cfg, out);
    if (cfg.command == "expand") return run_expand(cfg, out);
    return run_pv_saddle(cfg, out);
  } catch (const Error& e) {
    log_event(out, "error", error_code_name(e.code()), e.what());
    std::cerr << "vacpol: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    log_event(out, "error", "Unhandled", e.what());
    std::cerr << "vacpol: " << e.what() << "\n";
    return 10;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice solver for the Dirac vacuum in classical electromagnetic fields"};
  std::string config_path, output_dir = "out", resume, sweep;
  app.add_option("--config", config_path, "Run configuration file")->required();
  app.add_option("--output", output_dir, "Output directory");
  app.add_option("--resume", resume, "Checkpoint file to restart from");
  app.add_option("--sweep", sweep, "key=v1,v2,... run once per value in subdirectories");
  CLI11_PARSE(app, argc, argv);

  std::ifstream is(config_path, std::ios::binary);
  if (!is) {
    std::cerr << "vacpol: cannot open " << config_path << "\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << is.rdbuf();
  const std::string text = buffer.str();

  if (sweep.empty()) return run_one(text, {}, output_dir, resume);

  const auto eq = sweep.find('=');
  if (eq == std::string::npos) {
    std::cerr << "vacpol: --sweep expects key=v1,v2,...\n";
    return 1;
  }
  const std::string key = sweep.substr(0, eq);
  std::vector<std::string> values;
  std::stringstream ss(sweep.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(item);
  if (values.empty()) {
    std::cerr << "vacpol: --sweep has no values\n";
    return 1;
  }

  int workers = 1;
  if (const char* env = std::getenv("VACPOL_WORKERS")) workers = std::max(1, std::atoi(env));

  // Fan the sweep out across worker processes, one subdirectory per value.
  std::vector<pid_t> active;
  int status_all = 0;
  auto reap_one = [&] {
    int status = 0;
    const pid_t pid = waitpid(-1, &status, 0);
    if (pid > 0) {
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 10;
      if (code != 0 && status_all == 0) status_all = code;
      active.erase(std::remove(active.begin(), active.end(), pid), active.end());
    }
  };
  for (const std::string& v : values) {
    while (static_cast<int>(active.size()) >= workers) reap_one();
    const fs::path sub = fs::path(output_dir) / (key + "=" + v);
    const pid_t pid = fork();
    if (pid == 0) _exit(run_one(text, {{key, v}}, sub, resume));
    if (pid < 0) {
      std::cerr << "vacpol: fork failed\n";
      return 1;
    }
    active.push_back(pid);
  }
  while (!active.empty()) reap_one();
  return status_all;
}
