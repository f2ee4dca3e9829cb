#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poroiga/assembly.hpp"
#include "poroiga/model.hpp"
#include "poroiga/oracles.hpp"
#include "poroiga/timestep.hpp"

namespace poroiga {

/// Everything that determines the numbers an experiment produces.
struct RunConfig {
  // Source of the configuration; not part of equality.
  std::string preset;
  std::string config_path;

  ProblemSpec spec;
  std::vector<int> degrees{1};
  std::vector<OrderMode> modes{OrderMode::mixed};
  std::vector<InterfaceContinuity> continuities{InterfaceContinuity::max};
  int spans_x = 1;
  int spans_y = 72;
  bool graded = false;
  double grading_ratio = 1.2;
  std::optional<double> dt_factor;  // dt = factor * critical step, else spec.dt
  std::vector<int> output_steps;
  std::vector<int> levels;  // convergence: spans per direction
  int samples = 512;
  double profile_min = 0.0;  // y/h window of the sampled profiles
  double profile_max = 1.0;

  /// Throws ConfigError.
  void validate() const;
  bool operator==(const RunConfig& other) const;
};

/// Presets: "terzaghi", "convergence", "haga". Throws ConfigError otherwise.
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// Flat "key = value" lines, '#' comments, one [layer.N] section per material layer.
RunConfig parse_config(std::istream& in, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);
void write_config(std::ostream& out, const RunConfig& config);

/// (h / spans_y)^2 / (6 theta c_v) with the largest c_v over the layers.
double critical_step(const RunConfig& config);
/// spec with dt resolved from dt_factor.
ProblemSpec resolved_spec(const RunConfig& config);
Discretization make_discretization(const RunConfig& config, int pressure_degree, OrderMode mode,
                                   InterfaceContinuity continuity, bool graded);

const char* to_string(OrderMode mode);
const char* to_string(InterfaceContinuity continuity);

/// (y/h, p/p0) along x = w/2 at `samples` uniform parameter values in [lo, hi].
std::vector<std::pair<double, double>> centerline_profile(const Simulation& sim, const TransientState& state,
                                                         double lo, double hi, int samples);

/// Column table written as CSV with 17 significant digits.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  void add(std::string name, std::vector<double> values);
};
void write_csv(std::ostream& out, const Table& table);

struct ProfileReport {
  int step = 0;
  double t = 0.0;
  OscillationReport oscillation;
  double error = 0.0;  // relative 2-norm against the series over the profile (Terzaghi)
};

struct TerzaghiVariant {
  int pressure_degree = 1;
  OrderMode mode = OrderMode::mixed;
  Table profiles;  // y_over_h, then p_over_p0 and exact columns per output step
  std::vector<ProfileReport> reports;
  double max_residual = 0.0;
  double max_asymmetry = 0.0;
};

std::vector<TerzaghiVariant> run_terzaghi(const RunConfig& config,
                                          ExecutionPolicy policy = ExecutionPolicy::serial);

struct ConvergenceRow {
  int pressure_degree = 1;
  int spans = 1;
  int dofs = 0;
  double error = 0.0;           // against the series
  double discrete_error = 0.0;  // against the one-step time-discrete solution
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<std::pair<int, double>> slopes;
  std::vector<std::pair<int, double>> discrete_slopes;
};

ConvergenceResult run_convergence(const RunConfig& config, ExecutionPolicy policy = ExecutionPolicy::serial);

struct HagaVariant {
  int pressure_degree = 1;
  OrderMode mode = OrderMode::mixed;
  InterfaceContinuity continuity = InterfaceContinuity::max;
  bool graded = false;
  std::vector<std::vector<double>> profiles;  // p/p0 per output step
  OscillationReport report;                   // of the last output step
  OscillationReport layer_report;             // restricted to the low-permeability layer
};

struct HagaResult {
  std::vector<double> y_over_h;
  std::vector<int> steps;
  std::vector<HagaVariant> variants;
};

HagaResult run_haga(const RunConfig& config, ExecutionPolicy policy = ExecutionPolicy::serial);

/// Writes the CSV files of each command into `dir`; returns the paths written.
std::vector<std::string> write_terzaghi(const std::string& dir, const std::vector<TerzaghiVariant>& variants);
std::vector<std::string> write_convergence(const std::string& dir, const ConvergenceResult& result);
std::vector<std::string> write_haga(const std::string& dir, const HagaResult& result);

/// Basis dump: xi column plus one column per basis function.
Table basis_dump(const KnotVector& kv, int samples);
void write_continuity(std::ostream& out, const KnotVector& kv);

}  // namespace poroiga
