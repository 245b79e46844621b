// End-to-end checks of the batch front end: command dispatch, exit codes,
// sweep fan-out, and checkpoint resume. Takes the CLI binary path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool cond, const std::string& what) {
  if (!cond) {
    ++failures;
    std::printf("[FAIL] %s\n", what.c_str());
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

int run(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kTinySolve =
    "run.command = solve\n"
    "lattice.N = 1\nlattice.Lambda = 1.2\n"
    "physics.alpha = 0.05\n"
    "nu.profile = gaussian\nnu.Z = 0.3\nnu.sigma = 1\n";

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::printf("[FAIL] no CLI path given\n");
    return 1;
  }
  const std::string cli = argv[1];
  const fs::path work = "cli_work";
  fs::remove_all(work);
  fs::create_directories(work);

  // Basic solve writes the full output set.
  write(work / "solve.cfg", kTinySolve);
  check(run(cli + " --config " + (work / "solve.cfg").string() + " --output " +
            (work / "solve").string()) == 0,
        "solve exit code");
  for (const char* f : {"result.json", "density.json", "residuals.csv", "checkpoint.bin"})
    check(fs::exists(work / "solve" / f), std::string("solve output ") + f);
  check(slurp(work / "solve" / "result.json").find("\"config\"") != std::string::npos,
        "result embeds the resolved config");

  // Resume from the solve checkpoint.
  check(run(cli + " --config " + (work / "solve.cfg").string() + " --output " +
            (work / "resumed").string() + " --resume " +
            (work / "solve" / "checkpoint.bin").string()) == 0,
        "resume exit code");

  // Physical coupling input and the derived bare coupling in the header.
  write(work / "ph.cfg",
        "run.command = solve\nlattice.N = 1\nlattice.Lambda = 1.2\n"
        "physics.alpha_ph = 0.05\nnu.profile = none\n");
  check(run(cli + " --config " + (work / "ph.cfg").string() + " --output " +
            (work / "ph").string()) == 0,
        "alpha_ph solve exit code");
  check(slurp(work / "ph" / "result.json").find("\"physics.alpha_ph\"") != std::string::npos,
        "alpha_ph recorded");

  // Charged solve at N = 0.
  write(work / "charged.cfg",
        "run.command = solve-charged\nlattice.N = 1\nlattice.Lambda = 1.2\n"
        "physics.alpha = 0.05\nscf.charge = 0\n"
        "nu.profile = gaussian\nnu.Z = 0.3\nnu.sigma = 1\n");
  check(run(cli + " --config " + (work / "charged.cfg").string() + " --output " +
            (work / "charged").string()) == 0,
        "charged solve exit code");

  // Unreachable charge maps to its own exit code.
  write(work / "unreachable.cfg",
        "run.command = solve-charged\nlattice.N = 1\nlattice.Lambda = 1.2\n"
        "physics.alpha = 0\nscf.charge = 2\nnu.profile = none\n");
  check(run(cli + " --config " + (work / "unreachable.cfg").string() + " --output " +
            (work / "unreachable").string()) == 4,
        "unreachable charge exit code");
  check(slurp(work / "unreachable" / "log.jsonl").find("ChargeUnreachable") !=
            std::string::npos,
        "unreachable charge logged");

  // Landau pole at configuration time.
  write(work / "pole.cfg",
        "run.command = solve\nlattice.Lambda = 1e6\nphysics.alpha_ph = 3.0\n");
  check(run(cli + " --config " + (work / "pole.cfg").string() + " --output " +
            (work / "pole").string()) == 5,
        "Landau pole exit code");

  // Parse and validation failures.
  write(work / "broken.cfg", "run.command = solve\nnot a key value line\n");
  check(run(cli + " --config " + (work / "broken.cfg").string() + " --output " +
            (work / "broken").string()) == 1,
        "parse error exit code");
  write(work / "badkey.cfg", "run.command = solve\nphysics.alpha = 0.05\nscf.mxiing = 1\n");
  check(run(cli + " --config " + (work / "badkey.cfg").string() + " --output " +
            (work / "badkey").string()) == 1,
        "unknown key exit code");

  // Expansion command.
  write(work / "expand.cfg",
        "run.command = expand\nlattice.N = 1\nlattice.Lambda = 1.2\n"
        "nu.profile = gaussian\nnu.Z = 0.3\nnu.sigma = 1\n"
        "expand.order = 1\nexpand.samples = 0.02,0.04,0.06\n");
  check(run(cli + " --config " + (work / "expand.cfg").string() + " --output " +
            (work / "expand").string()) == 0,
        "expand exit code");
  check(fs::exists(work / "expand" / "expansion.json"), "expansion output");

  // Expansion with the continuum coupling conversion.
  write(work / "expandc.cfg",
        "run.command = expand\nlattice.N = 1\nlattice.Lambda = 1.2\n"
        "nu.profile = gaussian\nnu.Z = 0.3\nnu.sigma = 1\n"
        "expand.order = 1\nexpand.samples = 0.02,0.04,0.06\n"
        "expand.conversion = continuum\n");
  check(run(cli + " --config " + (work / "expandc.cfg").string() + " --output " +
            (work / "expandc").string()) == 0,
        "expand with conversion exit code");

  // Saddle command with no external field: zero potential.
  write(work / "pv.cfg",
        "run.command = pv-saddle\nlattice.N = 1\nlattice.Lambda = 1.8\n"
        "physics.e = 0.1\npv.m1 = 2\npv.m2 = 3\npvext.profile = none\n");
  check(run(cli + " --config " + (work / "pv.cfg").string() + " --output " +
            (work / "pv").string()) == 0,
        "pv-saddle exit code");
  {
    const std::string result = slurp(work / "pv" / "result.json");
    const auto pos = result.find("\"potential_norm\":");
    check(pos != std::string::npos, "pv result has potential norm");
    const double norm = std::strtod(result.c_str() + pos + 17, nullptr);
    check(norm <= 1e-10, "free saddle potential is zero");
    check(fs::exists(work / "pv" / "saddle_trace.csv"), "saddle trace output");
    check(fs::exists(work / "pv" / "potential.json"), "potential output");
  }

  // Saddle with an external scalar field.
  write(work / "pvext.cfg",
        "run.command = pv-saddle\nlattice.N = 1\nlattice.Lambda = 1.8\n"
        "physics.e = 0.1\npv.m1 = 2\npv.m2 = 3\n"
        "pvext.profile = v-gaussian\npvext.amplitude = 0.05\npvext.sigma = 1\n");
  check(run(cli + " --config " + (work / "pvext.cfg").string() + " --output " +
            (work / "pvext").string()) == 0,
        "pv-saddle with field exit code");

  // Sweep fans out into one subdirectory per value.
  check(run(cli + " --config " + (work / "solve.cfg").string() + " --output " +
            (work / "sweep").string() + " --sweep physics.alpha=0.02,0.05") == 0,
        "sweep exit code");
  check(fs::exists(work / "sweep" / "physics.alpha=0.02" / "result.json"),
        "sweep subdirectory 0.02");
  check(fs::exists(work / "sweep" / "physics.alpha=0.05" / "result.json"),
        "sweep subdirectory 0.05");
  check(slurp(work / "sweep" / "physics.alpha=0.02" / "result.json") !=
            slurp(work / "sweep" / "physics.alpha=0.05" / "result.json"),
        "sweep values differ");

  // Renorm command with screening study on a tiny lattice.
  write(work / "renorm.cfg",
        "run.command = renorm\nrenorm.ratios = 10,100\nrenorm.alphas = 0.1\n"
        "renorm.screening = true\nlattice.N = 1\nlattice.Lambda = 1.2\n"
        "physics.alpha = 0.05\nnu.profile = gaussian\nnu.Z = 0.3\nnu.sigma = 1\n"
        "scf.tol = 1e-10\nscf.mixing = 0.9\n");
  check(run(cli + " --config " + (work / "renorm.cfg").string() + " --output " +
            (work / "renorm").string()) == 0,
        "renorm exit code");
  check(fs::exists(work / "renorm" / "screening.csv"), "screening table");

  if (failures == 0) std::printf("cli: all checks passed\n");
  return failures;
}
