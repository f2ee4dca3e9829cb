#include "poroiga/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "poroiga/experiments.hpp"

namespace poroiga {

namespace {

// Pinned thresholds.
constexpr double kPartitionTol = 1e-12;
constexpr double kDerivativeTol = 1e-6;
constexpr int kSplineCases = 10000;
constexpr int kMaxDegree = 5;
constexpr double kFemOracleTol = 1e-12;
constexpr double kTerzaghiTol = 0.02;
constexpr double kSlopeTol = 0.15;
constexpr double kHagaEqualOvershoot = 0.25;
constexpr double kBandLo = 0.2;
constexpr double kBandHi = 0.3;
constexpr double kSymmetryTol = 1e-12;
constexpr double kResidualTol = 1e-9;
constexpr double kSettlementTol = 1e-6;
// Non-strict comparisons of oscillation metrics resolve differences at the
// metric's own noise floor.
constexpr double kMetricResolution = 1e-8;
constexpr unsigned kSeed = 20240611u;

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

// Plain Cox-de Boor recursion over the whole knot vector.
double naive_basis(const KnotVector& kv, int i, int p, double xi) {
  const auto u = kv.knots();
  if (p == 0) {
    if (u[i] <= xi && xi < u[i + 1]) return 1.0;
    // The right end belongs to the last nonempty span.
    if (xi == kv.back() && u[i] < u[i + 1] && u[i + 1] == kv.back()) return 1.0;
    return 0.0;
  }
  double left = 0.0, right = 0.0;
  if (u[i + p] > u[i]) left = (xi - u[i]) / (u[i + p] - u[i]) * naive_basis(kv, i, p - 1, xi);
  if (u[i + p + 1] > u[i + 1])
    right = (u[i + p + 1] - xi) / (u[i + p + 1] - u[i + 1]) * naive_basis(kv, i + 1, p - 1, xi);
  return left + right;
}

KnotVector random_knots(std::mt19937& rng, int p) {
  std::uniform_int_distribution<int> spans_dist(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int spans = spans_dist(rng);
  const double a = -2.0 + 4.0 * unit(rng);
  std::vector<double> breaks{a};
  for (int s = 0; s < spans; ++s) breaks.push_back(breaks.back() + 0.05 + unit(rng));
  std::vector<double> knots(static_cast<std::size_t>(p + 1), breaks.front());
  std::uniform_int_distribution<int> mult(1, std::max(1, p));
  for (std::size_t k = 1; k + 1 < breaks.size(); ++k)
    for (int m = mult(rng); m > 0; --m) knots.push_back(breaks[k]);
  knots.insert(knots.end(), static_cast<std::size_t>(p + 1), breaks.back());
  return KnotVector(knots, p);
}

CriterionResult spline_correctness() {
  CriterionResult r{1, "spline correctness", true, ""};
  std::mt19937 rng(kSeed);
  std::uniform_int_distribution<int> degree(1, kMaxDegree);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_pou = 0.0, worst_der = 0.0;
  int negative = 0, support = 0;
  for (int c = 0; c < kSplineCases; ++c) {
    const int p = degree(rng);
    const KnotVector kv = random_knots(rng, p);
    const auto breaks = kv.unique_knots();
    std::uniform_int_distribution<std::size_t> span_pick(0, breaks.size() - 2);
    const std::size_t s = span_pick(rng);
    const double a = breaks[s], b = breaks[s + 1];
    const double xi = a + (b - a) * (0.01 + 0.98 * unit(rng));

    const BasisEval be = eval_basis(kv, xi, 1);
    const int first = be.first_index(p);
    worst_pou = std::max(worst_pou, std::abs(be.values().sum() - 1.0));
    for (int i = 0; i < kv.basis_count(); ++i) {
      const double naive = naive_basis(kv, i, p, xi);
      const bool active = i >= first && i <= first + p;
      const double value = active ? be.ders(0, i - first) : 0.0;
      if (value < 0.0) ++negative;
      if (std::abs(value - naive) > kPartitionTol) ++support;
      if (naive != 0.0 && !(kv[i] <= xi && xi <= kv[i + p + 1])) ++support;
    }
    // Central differences inside the span.
    const double h = 1e-5 * (b - a);
    const BasisEval plus = eval_basis(kv, xi + h, 0);
    const BasisEval minus = eval_basis(kv, xi - h, 0);
    const double scale = std::max(1.0 / (b - a), be.ders.row(1).cwiseAbs().maxCoeff());
    for (int k = 0; k <= p; ++k) {
      const double fd = (plus.ders(0, k) - minus.ders(0, k)) / (2.0 * h);
      worst_der = std::max(worst_der, std::abs(fd - be.ders(1, k)) / scale);
    }
  }
  r.passed = worst_pou < kPartitionTol && negative == 0 && support == 0 && worst_der < kDerivativeTol;
  r.detail = std::to_string(kSplineCases) + " cases, max |sum N - 1| = " + fmt(worst_pou) +
             ", negative values = " + std::to_string(negative) + ", support mismatches = " +
             std::to_string(support) + ", max derivative error = " + fmt(worst_der);
  return r;
}

CriterionResult continuity_report_check() {
  CriterionResult r{2, "continuity report of the quartic example", true, ""};
  const KnotVector kv({0, 0, 0, 0, 0, 1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 5}, 4);
  const auto report = continuity_report(kv);
  const std::vector<KnotContinuity> expected{{1, 1, 3}, {2, 2, 2}, {3, 3, 1}, {4, 4, 0}};
  r.passed = report == expected && kv.basis_count() == 15;
  std::ostringstream os;
  for (const auto& k : report) os << "C" << k.continuity << "@" << k.knot << " ";
  os << "(" << kv.basis_count() << " functions)";
  r.detail = os.str();
  return r;
}

CriterionResult mixed_space_counts() {
  CriterionResult r{3, "mixed space counts", true, ""};
  MeshSpec mesh;
  const MixedSpace space = build_mixed_space(SplineSurface::rectangle(1.0, 1.0), 1, mesh, OrderMode::mixed);
  r.passed = space.pressure_basis_count() == 4 && space.displacement_basis_count() == 9;
  r.detail = std::to_string(space.pressure_basis_count()) + " pressure, " +
             std::to_string(space.displacement_basis_count()) + " displacement functions per component";
  return r;
}

// Bilinear quadrilaterals on a structured rectangle grid, nodes numbered
// i + (nx + 1) j, displacement DOFs interleaved per node.
void bilinear_matrices(double w, double h, int nx, int ny, const Eigen::Matrix3d& D, const Eigen::Matrix2d& kappa,
                       Eigen::MatrixXd& K, Eigen::MatrixXd& P) {
  const int nodes = (nx + 1) * (ny + 1);
  K = Eigen::MatrixXd::Zero(2 * nodes, 2 * nodes);
  P = Eigen::MatrixXd::Zero(nodes, nodes);
  const double hx = w / nx, hy = h / ny;
  const double g = 1.0 / std::sqrt(3.0);
  const double sx[4] = {-1, 1, -1, 1};
  const double sy[4] = {-1, -1, 1, 1};
  for (int ey = 0; ey < ny; ++ey)
    for (int ex = 0; ex < nx; ++ex) {
      const int node[4] = {ex + (nx + 1) * ey, ex + 1 + (nx + 1) * ey, ex + (nx + 1) * (ey + 1),
                           ex + 1 + (nx + 1) * (ey + 1)};
      for (double s : {-g, g})
        for (double t : {-g, g}) {
          const double weight = hx * hy / 4.0;
          Eigen::Matrix<double, 2, 4> grad;
          for (int a = 0; a < 4; ++a) {
            grad(0, a) = sx[a] * (1 + sy[a] * t) / 4.0 * 2.0 / hx;
            grad(1, a) = sy[a] * (1 + sx[a] * s) / 4.0 * 2.0 / hy;
          }
          Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
          for (int a = 0; a < 4; ++a) {
            B(0, 2 * a) = grad(0, a);
            B(1, 2 * a + 1) = grad(1, a);
            B(2, 2 * a) = grad(1, a);
            B(2, 2 * a + 1) = grad(0, a);
          }
          const Eigen::Matrix<double, 8, 8> ke = weight * B.transpose() * D * B;
          const Eigen::Matrix4d pe = weight * grad.transpose() * kappa * grad;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
              P(node[a], node[b]) += pe(a, b);
              for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) K(2 * node[a] + i, 2 * node[b] + j) += ke(2 * a + i, 2 * b + j);
            }
        }
    }
}

double relative_difference(const SparseMatrix& a, const Eigen::MatrixXd& b) {
  return (Eigen::MatrixXd(a) - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

CriterionResult fem_oracle() {
  CriterionResult r{4, "equal-order p=1 matches bilinear quadrilaterals", true, ""};
  const double w = 2.0, h = 1.5;
  const int nx = 3, ny = 4;
  MaterialParams m;
  m.youngs_modulus = 7.5;
  m.poisson_ratio = 0.3;
  m.mobility << 2.0, 0.4, 0.4, 0.5;
  const auto layers = MaterialLayerSet::single(h, m);
  MeshSpec mesh;
  mesh.spans_x = nx;
  mesh.spans_y = ny;
  const MixedSpace space = build_mixed_space(SplineSurface::rectangle(w, h), 1, mesh, OrderMode::equal);
  const QuadratureRule rule = make_quadrature(space);
  const SparseMatrix K = assemble_stiffness(space, layers, rule);
  const SparseMatrix P = assemble_permeability(space, layers, rule);
  Eigen::MatrixXd Kref, Pref;
  bilinear_matrices(w, h, nx, ny, elasticity_matrix(m.youngs_modulus, m.poisson_ratio), m.mobility, Kref, Pref);
  const double dk = relative_difference(K, Kref);
  const double dp = relative_difference(P, Pref);
  r.passed = dk < kFemOracleTol && dp < kFemOracleTol;
  r.detail = "max relative entry difference K " + fmt(dk) + ", P " + fmt(dp);
  return r;
}

CriterionResult terzaghi_accuracy() {
  CriterionResult r{5, "Terzaghi profile at t = 100 dt_c", true, ""};
  RunConfig c = preset_config("terzaghi");
  c.spec.steps = 100;
  c.output_steps = {100};
  const auto v = run_terzaghi(c).front();
  const auto& rep = v.reports.front();
  r.passed = rep.error < kTerzaghiTol && rep.oscillation.clean();
  r.detail = "relative L2 error " + fmt(rep.error) + ", overshoot " + fmt(rep.oscillation.overshoot) +
             ", undershoot " + fmt(rep.oscillation.undershoot) + ", violations " +
             std::to_string(rep.oscillation.violations);
  return r;
}

CriterionResult subcritical_ordering() {
  CriterionResult r{6, "sub-critical oscillation ordering", true, ""};
  RunConfig c = preset_config("terzaghi");
  c.dt_factor = 0.1;
  c.spec.steps = 1;
  c.output_steps = {1};
  c.degrees = {1, 2, 3};
  c.modes = {OrderMode::equal, OrderMode::mixed};
  const auto variants = run_terzaghi(c);
  auto over = [&](int pp, OrderMode mode) {
    for (const auto& v : variants)
      if (v.pressure_degree == pp && v.mode == mode) return v.reports.front().oscillation.overshoot;
    return std::numeric_limits<double>::quiet_NaN();
  };
  std::ostringstream os;
  for (int pp = 1; pp <= 3; ++pp) {
    const double e = over(pp, OrderMode::equal), m = over(pp, OrderMode::mixed);
    os << "pp" << pp << " equal " << fmt(e) << " mixed " << fmt(m) << "; ";
    if (!(e >= m - kMetricResolution && m >= 0.0)) r.passed = false;
    if (pp > 1 && !(e < over(pp - 1, OrderMode::equal) && m < over(pp - 1, OrderMode::mixed))) r.passed = false;
  }
  r.detail = os.str();
  return r;
}

CriterionResult convergence_rates(ConvergenceResult* keep = nullptr) {
  CriterionResult r{7, "convergence slopes", true, ""};
  const RunConfig c = preset_config("convergence");
  const ConvergenceResult res = run_convergence(c);
  std::ostringstream os;
  for (const auto& [pp, slope] : res.slopes) {
    const double expected = -(pp + 1) / 2.0;
    os << "pp" << pp << " " << fmt(slope, 3) << " (expected " << expected << ") ";
    if (std::abs(slope - expected) > kSlopeTol) r.passed = false;
  }
  if (res.slopes.size() != 3) r.passed = false;
  r.detail = os.str();
  if (keep) *keep = res;
  return r;
}

CriterionResult haga_battery() {
  CriterionResult r{8, "layered medium battery", true, ""};
  RunConfig c = preset_config("haga");
  const HagaResult uniform = run_haga(c);
  c.graded = true;
  const HagaResult graded = run_haga(c);
  auto find = [](const HagaResult& res, int pp, OrderMode mode, InterfaceContinuity k) -> const HagaVariant& {
    for (const auto& v : res.variants)
      if (v.pressure_degree == pp && v.mode == mode && v.continuity == k) return v;
    throw std::logic_error("missing variant");
  };
  std::ostringstream os;

  const double a = find(uniform, 1, OrderMode::equal, InterfaceContinuity::max).layer_report.overshoot;
  const bool pass_a = a > kHagaEqualOvershoot;
  os << "(a) " << (pass_a ? "ok" : "FAIL") << " equal p1 layer overshoot " << fmt(a) << "; ";

  bool pass_b = true;
  for (int pp = 1; pp <= 4; ++pp)
    for (auto k : {InterfaceContinuity::max, InterfaceContinuity::c0})
      if (!(find(uniform, pp, OrderMode::mixed, k).report.overshoot <
            find(uniform, pp, OrderMode::equal, k).report.overshoot))
        pass_b = false;
  os << "(b) " << (pass_b ? "ok" : "FAIL") << "; ";

  bool pass_c = true;
  double lo = 1.0, hi = 0.0;
  for (const auto& v : uniform.variants) {
    if (v.mode != OrderMode::mixed) continue;
    for (double y : v.report.violation_positions) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
      if (y < kBandLo || y > kBandHi) pass_c = false;
    }
  }
  os << "(c) " << (pass_c ? "ok" : "FAIL") << " mixed violations span y/h in [" << fmt(lo, 3) << ", "
     << fmt(hi, 3) << "]; ";

  bool pass_d = true;
  int worse = 0;
  for (const auto& u : uniform.variants) {
    const auto& g = find(graded, u.pressure_degree, u.mode, u.continuity);
    if (!(g.report.overshoot < u.report.overshoot)) {
      pass_d = false;
      ++worse;
    }
  }
  os << "(d) " << (pass_d ? "ok" : "FAIL") << " " << worse << " variants not improved by grading; ";

  bool pass_e = true;
  for (const HagaResult* res : {&uniform, &graded})
    for (int pp = 1; pp <= 4; ++pp)
      if (!(find(*res, pp, OrderMode::mixed, InterfaceContinuity::c0).report.overshoot <=
            find(*res, pp, OrderMode::mixed, InterfaceContinuity::max).report.overshoot + kMetricResolution))
        pass_e = false;
  os << "(e) " << (pass_e ? "ok" : "FAIL");

  r.passed = pass_a && pass_b && pass_c && pass_d && pass_e;
  r.detail = os.str();
  return r;
}

CriterionResult system_invariants() {
  CriterionResult r{9, "system invariants", true, ""};
  double asym = 0.0, residual = 0.0;
  auto track = [&](const Simulation& sim, const ProblemSpec& spec) {
    const TimeIntegrator integ(sim.constrained(), spec.dt, spec.theta);
    const SparseMatrix& A = integ.system_matrix();
    const SparseMatrix D = A - SparseMatrix(A.transpose());
    double scale = 0.0, diff = 0.0;
    for (Eigen::Index i = 0; i < A.nonZeros(); ++i) scale = std::max(scale, std::abs(A.valuePtr()[i]));
    for (Eigen::Index i = 0; i < D.nonZeros(); ++i) diff = std::max(diff, std::abs(D.valuePtr()[i]));
    asym = std::max(asym, diff / scale);
    sim.run({}, [&](const TransientState& s) { residual = std::max(residual, s.residual); });
  };
  for (const std::string name : {"terzaghi", "convergence", "haga"}) {
    RunConfig c = preset_config(name);
    if (name == "convergence") c.spans_x = c.spans_y = 8;
    const ProblemSpec spec = resolved_spec(c);
    for (int pp : c.degrees)
      for (OrderMode mode : c.modes)
        for (InterfaceContinuity k : c.continuities) track(Simulation(spec, make_discretization(c, pp, mode, k, false)), spec);
  }

  // Drained limit: steps much longer than the consolidation time.
  RunConfig c = preset_config("terzaghi");
  ProblemSpec spec = resolved_spec(c);
  const auto& m = spec.layers.layers().front().params;
  const double cv = consolidation_coefficient(m.youngs_modulus, m.poisson_ratio, m.mobility(1, 1));
  spec.dt = 10.0 * spec.height * spec.height / cv;
  spec.steps = 30;
  const Simulation sim(spec, make_discretization(c, 1, OrderMode::mixed, InterfaceContinuity::max, false));
  const std::vector<int> last{spec.steps};
  const TransientState s = sim.run(last, [&](const TransientState& st) { residual = std::max(residual, st.residual); }).back();
  const double settlement = eval_displacement(sim.space(), sim.full_displacement(s), 0.5, 1.0).y();
  const double expected = oedometer_settlement(spec.load, spec.height, m.youngs_modulus, m.poisson_ratio);
  const double rel = std::abs(settlement - expected) / std::abs(expected);

  r.passed = asym < kSymmetryTol && residual < kResidualTol && rel < kSettlementTol;
  r.detail = "max asymmetry " + fmt(asym) + ", max step residual " + fmt(residual) +
             ", drained settlement error " + fmt(rel);
  return r;
}

std::string slurp_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    all += f.filename().string() + "\n" + ss.str();
  }
  return all;
}

CriterionResult determinism() {
  CriterionResult r{10, "determinism", true, ""};
  const auto root = std::filesystem::temp_directory_path() / ("poroiga-determinism-" + std::to_string(::getpid()));
  std::ostringstream os;
  for (const std::string name : {"terzaghi", "convergence", "haga"}) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const auto dir = root / (name + std::to_string(run));
      const RunConfig c = preset_config(name);
      if (name == "terzaghi") write_terzaghi(dir.string(), run_terzaghi(c));
      else if (name == "convergence") write_convergence(dir.string(), run_convergence(c));
      else write_haga(dir.string(), run_haga(c));
      outputs[run] = slurp_dir(dir);
    }
    const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
    if (!same) r.passed = false;
    os << name << " " << (same ? "identical" : "DIFFERENT") << " (" << outputs[0].size() << " bytes); ";
  }
  std::error_code ec;
  std::filesystem::remove_all(root, ec);
  r.detail = os.str();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids) {
  const std::vector<std::function<CriterionResult()>> all{
      spline_correctness, continuity_report_check, mixed_space_counts, fem_oracle, terzaghi_accuracy,
      subcritical_ordering, [] { return convergence_rates(); }, haga_battery, system_invariants, determinism};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(all.size()); ++id) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    try {
      out.push_back(all[id - 1]());
    } catch (const std::exception& e) {
      out.push_back({id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()});
    }
  }
  return out;
}

void print_results(std::ostream& out, const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << ": " << r.detail << "\n";
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

}  // namespace poroiga
