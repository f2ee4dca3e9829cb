// Command-line driver for the consolidation experiments.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "poroiga/acceptance.hpp"
#include "poroiga/errors.hpp"
#include "poroiga/experiments.hpp"

using namespace poroiga;

namespace {

enum Exit { ok = 0, config_error = 2, solver_error = 3, check_failed = 4 };

struct Flags {
  std::string preset;
  std::string config;
  int pp = 0;
  std::string mode;
  int nel = 0;
  double dt_factor = 0.0;
  int steps = -1;
  std::string continuity;
  std::string grading;
  std::vector<int> output_steps;
  bool output_steps_given = false;
  std::vector<int> levels;
  std::string out = ".";
  int threads = 1;
  bool check = false;
  std::string dump_config;
  std::string dump_matrices;
  // basis
  std::vector<double> knots;
  int degree = -1;
  int samples = 0;
};

RunConfig resolve(const std::string& command, const Flags& f, const CLI::App& app) {
  RunConfig c = !f.config.empty() ? load_config(f.config) : preset_config(f.preset.empty() ? command : f.preset);
  if (f.pp > 0) c.degrees = {f.pp};
  if (!f.mode.empty()) c.modes = {f.mode == "equal" ? OrderMode::equal : OrderMode::mixed};
  if (!f.continuity.empty())
    c.continuities = {f.continuity == "c0" ? InterfaceContinuity::c0 : InterfaceContinuity::max};
  if (!f.grading.empty()) c.graded = f.grading == "graded";
  if (f.nel > 0) c.spans_y = f.nel;
  if (app.count("--dt-factor")) c.dt_factor = f.dt_factor;
  if (f.steps >= 0) {
    c.spec.steps = f.steps;
    std::erase_if(c.output_steps, [&](int s) { return s > f.steps; });
    if (c.output_steps.empty() && f.steps > 0) c.output_steps = {f.steps};
  }
  if (f.output_steps_given) c.output_steps = f.output_steps;
  if (!f.levels.empty()) c.levels = f.levels;
  if (f.samples > 0) c.samples = f.samples;
  c.validate();
  return c;
}

std::vector<int> criteria_for(const std::string& command) {
  if (command == "terzaghi") return {5, 6, 9, 10};
  if (command == "convergence") return {7};
  if (command == "haga") return {8};
  if (command == "basis") return {1, 2};
  return {};
}

void dump_matrices(const std::string& dir, const RunConfig& c, ExecutionPolicy policy) {
  const Simulation sim(resolved_spec(c),
                       make_discretization(c, c.degrees.front(), c.modes.front(), c.continuities.front(), c.graded),
                       policy);
  std::filesystem::create_directories(dir);
  const auto& s = sim.system();
  const std::pair<const char*, const SparseMatrix*> blocks[] = {{"K", &s.K}, {"Q", &s.Q}, {"S", &s.S}, {"P", &s.P}};
  for (const auto& [name, m] : blocks) {
    std::ofstream out(std::filesystem::path(dir) / (std::string(name) + ".mtx"));
    write_coordinate(out, *m);
  }
}

int run(const std::string& command, const Flags& f, const CLI::App& app) {
  omp_set_num_threads(std::max(1, f.threads));
  const ExecutionPolicy policy = f.threads > 1 ? ExecutionPolicy::parallel : ExecutionPolicy::serial;

  if (command == "basis") {
    if (f.knots.empty() || f.degree < 0) throw ConfigError("basis needs --knots and --degree");
    KnotVector kv = [&] {
      try {
        return KnotVector(f.knots, f.degree);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid knot vector: ") + e.what());
      }
    }();
    std::filesystem::create_directories(f.out);
    const auto path = std::filesystem::path(f.out) / "basis.csv";
    std::ofstream out(path);
    write_csv(out, basis_dump(kv, f.samples > 0 ? f.samples : 501));
    std::ofstream cont(std::filesystem::path(f.out) / "basis_continuity.csv");
    write_continuity(cont, kv);
    std::cout << kv.basis_count() << " basis functions of degree " << kv.degree() << "\n";
    for (const auto& k : continuity_report(kv))
      std::cout << "  xi = " << k.knot << ": multiplicity " << k.multiplicity << ", C" << k.continuity << "\n";
  } else {
    const RunConfig c = resolve(command, f, app);
    if (!f.dump_config.empty()) {
      std::ofstream out(f.dump_config);
      if (!out) throw ConfigError("cannot write '" + f.dump_config + "'");
      write_config(out, c);
    }
    if (!f.dump_matrices.empty()) dump_matrices(f.dump_matrices, c, policy);

    std::vector<std::string> written;
    if (command == "terzaghi") {
      const auto variants = run_terzaghi(c, policy);
      written = write_terzaghi(f.out, variants);
      for (const auto& v : variants)
        for (const auto& r : v.reports)
          std::cout << "pp=" << v.pressure_degree << " " << to_string(v.mode) << " step " << r.step
                    << ": error " << r.error << ", overshoot " << r.oscillation.overshoot << ", undershoot "
                    << r.oscillation.undershoot << ", violations " << r.oscillation.violations << "\n";
    } else if (command == "convergence") {
      const auto res = run_convergence(c, policy);
      written = write_convergence(f.out, res);
      std::cout << "pp  spans  dofs  rel_l2_error\n";
      for (const auto& r : res.rows)
        std::cout << r.pressure_degree << "  " << r.spans << "  " << r.dofs << "  " << r.error << "\n";
      for (const auto& [pp, slope] : res.slopes) std::cout << "slope pp=" << pp << ": " << slope << "\n";
    } else {
      const auto res = run_haga(c, policy);
      written = write_haga(f.out, res);
      for (const auto& v : res.variants)
        std::cout << "pp=" << v.pressure_degree << " " << to_string(v.mode) << " " << to_string(v.continuity)
                  << (v.graded ? " graded" : " uniform") << ": overshoot " << v.report.overshoot
                  << ", violations " << v.report.violations << "\n";
    }
    for (const auto& w : written) std::cout << "wrote " << w << "\n";
  }

  if (f.check) {
    const auto results = run_acceptance(criteria_for(command));
    print_results(std::cout, results);
    if (!all_passed(results)) return check_failed;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed isogeometric solver for linear Biot consolidation"};
  app.require_subcommand(1);
  Flags f;

  auto* preset = app.add_option("--preset", f.preset, "Preset: terzaghi, convergence, haga")
                     ->check(CLI::IsMember(preset_names()));
  auto* config = app.add_option("--config", f.config, "Config file (key = value, [layer.N] sections)");
  preset->excludes(config);
  config->excludes(preset);
  app.add_option("--pp", f.pp, "Pressure degree")->check(CLI::Range(1, 10));
  app.add_option("--mode", f.mode, "Order mode")->check(CLI::IsMember({"mixed", "equal"}));
  app.add_option("--nel", f.nel, "Knot spans in y")->check(CLI::PositiveNumber);
  app.add_option("--dt-factor", f.dt_factor, "Time step as a multiple of the critical step")
      ->check(CLI::PositiveNumber);
  app.add_option("--steps", f.steps, "Number of time steps")->check(CLI::NonNegativeNumber);
  app.add_option("--continuity", f.continuity, "Interface continuity")->check(CLI::IsMember({"c0", "max"}));
  app.add_option("--grading", f.grading, "Mesh grading in y")->check(CLI::IsMember({"uniform", "graded"}));
  app.add_option_function<std::vector<int>>(
         "--output-steps",
         [&](const std::vector<int>& v) {
           f.output_steps = v;
           f.output_steps_given = true;
         },
         "Steps to write (comma separated; empty for none)")
      ->delimiter(',')
      ->expected(0, -1);
  app.add_option("--levels", f.levels, "Convergence refinements (spans per direction)")->delimiter(',');
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--threads", f.threads, "Assembly threads (1 = serial reference path)")->check(CLI::PositiveNumber);
  app.add_flag("--check", f.check, "Run the acceptance criteria of the command; exit 4 on failure");
  app.add_option("--dump-config", f.dump_config, "Write the resolved configuration to a file");
  app.add_option("--dump-matrices", f.dump_matrices, "Write K, Q, S, P in coordinate format to a directory");
  app.add_option("--samples", f.samples, "Profile or basis samples")->check(CLI::Range(2, 1000000));

  auto* terzaghi = app.add_subcommand("terzaghi", "Consolidation column against the series solution");
  auto* convergence = app.add_subcommand("convergence", "Spatial convergence study");
  auto* haga = app.add_subcommand("haga", "Low-permeability layer sweep");
  auto* basis = app.add_subcommand("basis", "Dump a B-spline basis and its continuity report");
  basis->add_option("--knots", f.knots, "Knot vector")->delimiter(',');
  basis->add_option("--degree", f.degree, "Degree")->check(CLI::NonNegativeNumber);
  for (auto* sub : {terzaghi, convergence, haga, basis}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, f, app);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return solver_error;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return solver_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_error;
  }
}
