#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "poroiga/errors.hpp"
#include "poroiga/experiments.hpp"

namespace poroiga {

std::vector<std::pair<double, double>> centerline_profile(const Simulation& sim, const TransientState& state,
                                                         double lo, double hi, int samples) {
  const Eigen::VectorXd p = sim.full_pressure(state);
  const double p0 = sim.spec().load;
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double eta = i + 1 == samples ? hi : lo + (hi - lo) * i / (samples - 1);
    out.emplace_back(eta, eval_pressure(sim.space(), p, 0.5, eta) / p0);
  }
  return out;
}

void Table::add(std::string name, std::vector<double> values) {
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
  out << "\n";
  std::size_t rows = 0;
  for (const auto& c : table.columns) rows = std::max(rows, c.size());
  // With only the coordinate column present there is nothing to report.
  if (table.columns.size() <= 1) rows = 0;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j) out << ",";
      if (i < table.columns[j].size()) out << table.columns[j][i];
    }
    out << "\n";
  }
}

namespace {

double max_asymmetry(const SparseMatrix& A) {
  const SparseMatrix D = A - SparseMatrix(A.transpose());
  double scale = 0.0, diff = 0.0;
  for (Eigen::Index i = 0; i < A.nonZeros(); ++i) scale = std::max(scale, std::abs(A.valuePtr()[i]));
  for (Eigen::Index i = 0; i < D.nonZeros(); ++i) diff = std::max(diff, std::abs(D.valuePtr()[i]));
  return scale > 0.0 ? diff / scale : diff;
}

std::vector<double> seconds(const std::vector<std::pair<double, double>>& profile) {
  std::vector<double> out;
  for (const auto& v : profile) out.push_back(v.second);
  return out;
}

std::vector<double> firsts(const std::vector<std::pair<double, double>>& profile) {
  std::vector<double> out;
  for (const auto& v : profile) out.push_back(v.first);
  return out;
}

double layer_cv(const MaterialParams& m) {
  return consolidation_coefficient(m.youngs_modulus, m.poisson_ratio, m.mobility(1, 1));
}

}  // namespace

std::vector<TerzaghiVariant> run_terzaghi(const RunConfig& config, ExecutionPolicy policy) {
  config.validate();
  const ProblemSpec spec = resolved_spec(config);
  const auto& material = spec.layers.layers().front().params;
  const TerzaghiSolution exact{spec.load, spec.height, layer_cv(material)};

  std::vector<TerzaghiVariant> out;
  for (int pp : config.degrees) {
    for (OrderMode mode : config.modes) {
      const Simulation sim(spec, make_discretization(config, pp, mode, config.continuities.front(), config.graded),
                           policy);
      TerzaghiVariant v;
      v.pressure_degree = pp;
      v.mode = mode;
      const auto series = sim.run(config.output_steps, [&](const TransientState& s) {
        v.max_residual = std::max(v.max_residual, s.residual);
      });
      v.max_asymmetry = max_asymmetry(TimeIntegrator(sim.constrained(), spec.dt, spec.theta, false).system_matrix());

      bool first = true;
      for (const auto& s : series) {
        if (s.step == 0 && std::find(config.output_steps.begin(), config.output_steps.end(), 0) ==
                               config.output_steps.end())
          continue;
        const auto profile =
            centerline_profile(sim, s, config.profile_min, config.profile_max, config.samples);
        if (first) v.profiles.add("y_over_h", firsts(profile));
        first = false;
        ProfileReport r;
        r.step = s.step;
        r.t = s.t;
        r.oscillation = oscillation_metrics(profile, 1.0);
        const std::string tag = "_step" + std::to_string(s.step);
        v.profiles.add("p_over_p0" + tag, seconds(profile));
        if (s.t > 0.0) {
          std::vector<double> ref;
          for (const auto& [eta, p] : profile) ref.push_back(terzaghi_pressure(exact, s.t, eta * spec.height) / spec.load);
          r.error = relative_profile_error(seconds(profile), ref);
          v.profiles.add("exact" + tag, std::move(ref));
        }
        v.reports.push_back(r);
      }
      if (first) v.profiles.header.push_back("y_over_h");
      out.push_back(std::move(v));
    }
  }
  return out;
}

ConvergenceResult run_convergence(const RunConfig& config, ExecutionPolicy policy) {
  config.validate();
  if (config.levels.empty()) throw ConfigError("convergence study needs refinement levels");
  const ProblemSpec spec = resolved_spec(config);
  const auto& material = spec.layers.layers().front().params;
  const TerzaghiSolution exact{spec.load, spec.height, layer_cv(material)};

  ConvergenceResult result;
  for (int pp : config.degrees) {
    std::vector<std::pair<double, double>> points;
    std::vector<std::pair<double, double>> discrete_points;
    for (int n : config.levels) {
      RunConfig level = config;
      level.spans_x = n;
      level.spans_y = n;
      const Simulation sim(spec, make_discretization(level, pp, config.modes.front(), config.continuities.front(), false),
                           policy);
      const std::vector<int> last{spec.steps};
      const TransientState state = sim.run(last).back();
      const Eigen::VectorXd p = sim.full_pressure(state);
      const auto& rule = sim.quadrature();
      std::vector<double> ph;
      ph.reserve(rule.points.size());
      for (const auto& q : rule.points) ph.push_back(eval_pressure(sim.space(), p, q.xi, q.eta));
      const auto pts = physical_points(sim.space(), rule);

      // The exact field depends on y only; cache it per quadrature row.
      std::map<double, double> series_cache;
      std::map<double, double> discrete_cache;
      const auto numerical = [&](std::size_t i) { return ph[i]; };
      const auto series = [&](const Eigen::Vector2d& x) {
        auto [it, fresh] = series_cache.try_emplace(x.y(), 0.0);
        if (fresh) it->second = terzaghi_pressure(exact, state.t, std::clamp(x.y(), 0.0, spec.height));
        return it->second;
      };
      const auto discrete = [&](const Eigen::Vector2d& x) {
        auto [it, fresh] = discrete_cache.try_emplace(x.y(), 0.0);
        if (fresh) it->second = terzaghi_first_step_pressure(exact, spec.dt, std::clamp(x.y(), 0.0, spec.height));
        return it->second;
      };
      ConvergenceRow row;
      row.pressure_degree = pp;
      row.spans = n;
      row.dofs = sim.space().total_dofs();
      row.error = relative_l2_error(numerical, series, pts);
      row.discrete_error = spec.steps == 1 ? relative_l2_error(numerical, discrete, pts) : 0.0;
      result.rows.push_back(row);
      points.emplace_back(row.dofs, row.error);
      discrete_points.emplace_back(row.dofs, row.discrete_error);
    }
    if (points.size() >= 3) {
      result.slopes.emplace_back(pp, fit_convergence_slope(points));
      if (spec.steps == 1) result.discrete_slopes.emplace_back(pp, fit_convergence_slope(discrete_points));
    }
  }
  return result;
}

HagaResult run_haga(const RunConfig& config, ExecutionPolicy policy) {
  config.validate();
  const ProblemSpec spec = resolved_spec(config);
  // The layer with the smallest vertical mobility.
  double lo = 0.0, hi = 1.0, kmin = INFINITY;
  for (const auto& l : spec.layers.layers())
    if (l.params.mobility(1, 1) < kmin) {
      kmin = l.params.mobility(1, 1);
      lo = l.y_min / spec.height;
      hi = l.y_max / spec.height;
    }

  HagaResult result;
  for (int pp : config.degrees)
    for (OrderMode mode : config.modes)
      for (InterfaceContinuity cont : config.continuities) {
        const Simulation sim(spec, make_discretization(config, pp, mode, cont, config.graded), policy);
        const auto series = sim.run(config.output_steps);
        HagaVariant v;
        v.pressure_degree = pp;
        v.mode = mode;
        v.continuity = cont;
        v.graded = config.graded;
        std::vector<std::pair<double, double>> last;
        for (const auto& s : series) {
          if (std::find(config.output_steps.begin(), config.output_steps.end(), s.step) == config.output_steps.end())
            continue;
          last = centerline_profile(sim, s, config.profile_min, config.profile_max, config.samples);
          if (result.y_over_h.empty()) result.y_over_h = firsts(last);
          if (result.variants.empty()) result.steps.push_back(s.step);
          v.profiles.push_back(seconds(last));
        }
        if (!last.empty()) {
          v.report = oscillation_metrics(last, 1.0);
          std::vector<std::pair<double, double>> inside;
          for (const auto& pt : last)
            if (pt.first >= lo && pt.first <= hi) inside.push_back(pt);
          v.layer_report = oscillation_metrics(inside, 1.0);
        }
        result.variants.push_back(std::move(v));
      }
  return result;
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace

std::vector<std::string> write_terzaghi(const std::string& dir, const std::vector<TerzaghiVariant>& variants) {
  ensure_dir(dir);
  std::vector<std::string> written;
  Table report;
  std::vector<double> pp, mode, step, t, over, under, viol, err;
  for (const auto& v : variants) {
    const std::string name =
        "terzaghi_pp" + std::to_string(v.pressure_degree) + "_" + to_string(v.mode) + ".csv";
    auto out = open_output(join_path(dir, name));
    write_csv(out, v.profiles);
    written.push_back(join_path(dir, name));
  }
  const std::string path = join_path(dir, "terzaghi_oscillation.csv");
  auto out = open_output(path);
  out << "pp,mode,step,t,overshoot,undershoot,violations,rel_error\n" << std::setprecision(17);
  for (const auto& v : variants)
    for (const auto& r : v.reports)
      out << v.pressure_degree << "," << to_string(v.mode) << "," << r.step << "," << r.t << ","
          << r.oscillation.overshoot << "," << r.oscillation.undershoot << "," << r.oscillation.violations << ","
          << r.error << "\n";
  written.push_back(path);
  return written;
}

std::vector<std::string> write_convergence(const std::string& dir, const ConvergenceResult& result) {
  ensure_dir(dir);
  const std::string table = join_path(dir, "convergence.csv");
  auto out = open_output(table);
  out << "pp,spans,dofs,rel_l2_error,rel_l2_error_time_discrete\n" << std::setprecision(17);
  for (const auto& r : result.rows)
    out << r.pressure_degree << "," << r.spans << "," << r.dofs << "," << r.error << "," << r.discrete_error << "\n";
  const std::string slopes = join_path(dir, "convergence_slopes.csv");
  auto s = open_output(slopes);
  s << "pp,slope,slope_time_discrete\n" << std::setprecision(17);
  for (std::size_t i = 0; i < result.slopes.size(); ++i) {
    s << result.slopes[i].first << "," << result.slopes[i].second << ",";
    if (i < result.discrete_slopes.size()) s << result.discrete_slopes[i].second;
    s << "\n";
  }
  return {table, slopes};
}

std::vector<std::string> write_haga(const std::string& dir, const HagaResult& result) {
  ensure_dir(dir);
  std::vector<std::string> written;
  // One file per (grading, continuity, mode) with a column per degree and step.
  std::map<std::string, Table> files;
  std::vector<std::string> order;
  for (const auto& v : result.variants) {
    const std::string name = std::string("haga_") + (v.graded ? "graded" : "uniform") + "_" +
                             to_string(v.continuity) + "_" + to_string(v.mode) + ".csv";
    auto [it, fresh] = files.try_emplace(name);
    if (fresh) {
      order.push_back(name);
      it->second.add("y_over_h", result.y_over_h);
    }
    for (std::size_t k = 0; k < v.profiles.size(); ++k)
      it->second.add("pp" + std::to_string(v.pressure_degree) + "_step" + std::to_string(result.steps[k]),
                     v.profiles[k]);
  }
  for (const auto& name : order) {
    auto out = open_output(join_path(dir, name));
    write_csv(out, files[name]);
    written.push_back(join_path(dir, name));
  }
  const std::string path = join_path(dir, "haga_oscillation.csv");
  auto out = open_output(path);
  out << "pp,mode,continuity,grading,overshoot,undershoot,violations,layer_overshoot,first_violation,"
         "last_violation\n"
      << std::setprecision(17);
  for (const auto& v : result.variants) {
    const auto& pos = v.report.violation_positions;
    out << v.pressure_degree << "," << to_string(v.mode) << "," << to_string(v.continuity) << ","
        << (v.graded ? "graded" : "uniform") << "," << v.report.overshoot << "," << v.report.undershoot << ","
        << v.report.violations << "," << v.layer_report.overshoot << ",";
    if (!pos.empty()) out << pos.front() << "," << pos.back();
    else out << ",";
    out << "\n";
  }
  written.push_back(path);
  return written;
}

Table basis_dump(const KnotVector& kv, int samples) {
  const Eigen::MatrixXd values = basis_table(kv, samples);
  Table t;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    std::vector<double> col(values.rows());
    for (Eigen::Index i = 0; i < values.rows(); ++i) col[i] = values(i, j);
    t.add(j == 0 ? std::string("xi") : "N" + std::to_string(j - 1), std::move(col));
  }
  return t;
}

void write_continuity(std::ostream& out, const KnotVector& kv) {
  out << "knot,multiplicity,continuity\n" << std::setprecision(17);
  for (const auto& k : continuity_report(kv)) out << k.knot << "," << k.multiplicity << "," << k.continuity << "\n";
}

}  // namespace poroiga
