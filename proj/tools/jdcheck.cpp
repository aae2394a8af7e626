// jdcheck: run the checks of a scenario file and print a JSON report.
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 the scenario could not
// be read (schema, reference or expression error, located in the message).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "jd/expr.hpp"
#include "scenario.hpp"

namespace {

// Relative names that do not exist here are tried under $JDCHECK_SCENARIO_DIR,
// with and without a .json suffix.
std::string resolve_scenario(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  const char* dir = std::getenv("JDCHECK_SCENARIO_DIR");
  if (dir == nullptr || fs::path(path).is_absolute()) return path;
  for (const std::string& name : {path, path + ".json"}) {
    const fs::path p = fs::path(dir) / name;
    if (fs::exists(p)) return p.string();
  }
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check Jacobi-Dirac constructions described by a scenario file"};
  app.require_subcommand(1);

  std::string path, out;
  double tol = 0.0;
  bool timing = false;
  int samples = 0, nodes = 0;
  std::uint64_t seed = 0;

  const char* commands[][2] = {
      {"check-structure", "isotropy, bracket closure and d(d) on the declared structures"},
      {"prequantize", "prequantization condition, Lbar and its properties"},
      {"reduce", "cotangent and prequantized reductions, zero-level rank probes"},
      {"groupoid", "groupoid axioms, multiplicativity, non-degeneracy, the two isomorphisms"},
      {"apath", "A-path integration, development, lifts, homotopies, periods"},
      {"vorobjev", "coupling Poisson structure and its leaf form"},
      {"all", "every block present in the scenario"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("scenario", path, "scenario JSON file, also looked up in $JDCHECK_SCENARIO_DIR")->required();
    sub->add_option("--samples", samples, "random samples per check")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "sampling seed");
    sub->add_option("--tol", tol, "override every residual threshold")->check(CLI::PositiveNumber);
    sub->add_option("--nodes", nodes, "RK4 steps on [0, 1]")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "also write the report to this file");
    sub->add_flag("--timing", timing, "include wall times (reports are no longer byte-stable)");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  path = resolve_scenario(path);

  try {
    jdcli::Scenario s = jdcli::Scenario::load(path);
    jdcli::RunConfig cfg = s.config();
    for (CLI::App* sub : app.get_subcommands()) {
      if (sub->count("--samples")) cfg.samples = samples;
      if (sub->count("--seed")) cfg.seed = seed;
      if (sub->count("--tol")) cfg.tol = tol;
      if (sub->count("--nodes")) cfg.rk4_nodes = nodes;
    }
    cfg.timing = timing;
    s.override_config(cfg);

    const jdcli::Command cmd = jdcli::parse_command(name);
    const jd::Report r = s.run(cmd);
    const std::string text = jdcli::report_json(r, s.name(), cmd, timing).dump(2) + "\n";
    std::cout << text;
    if (!out.empty()) {
      std::ofstream f(out);
      if (!f) {
        std::cerr << "jdcheck: cannot write " << out << "\n";
        return 2;
      }
      f << text;
    }
    for (const auto& rec : r.records)
      if (!rec.pass) std::cerr << "FAIL " << rec.id << "  residual " << rec.max_residual << " > " << rec.threshold << "\n";
    return r.pass() ? 0 : 1;
  } catch (const jdcli::ScenarioError& e) {
    std::cerr << "jdcheck: " << path << ": " << e.what() << "\n";
    return 2;
  } catch (const jd::ParseError& e) {
    std::cerr << "jdcheck: " << path << ": offset " << e.offset() << ": " << e.what() << "\n";
    return 2;
  } catch (const jd::StructureError& e) {
    std::cerr << "jdcheck: " << path << ": " << e.what() << "\n";
    return 2;
  }
}
