#include "poroiga/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "poroiga/errors.hpp"

namespace poroiga {

double terzaghi_pressure(const TerzaghiSolution& sol, double t, double y) {
  if (!(t > 0.0)) throw ArgumentError("the series needs t > 0");
  if (!(y >= 0.0 && y <= sol.height)) throw ArgumentError("y outside [0, h]");
  const double pi = std::numbers::pi;
  const double ts = sol.cv * t / (sol.height * sol.height);
  const double amp = 4.0 / pi;
  double sum = 0.0;
  for (long i = 1; i <= sol.max_terms; ++i) {
    const double k = 2.0 * i - 1.0;
    const double decay = std::exp(-k * k * pi * pi * ts / 4.0);
    const double bound = amp * decay / k;
    if (bound < sol.tolerance) break;
    const double sign = (i % 2 == 1) ? 1.0 : -1.0;
    sum += sign * decay / k * std::cos(k * pi * y / (2.0 * sol.height));
  }
  return sol.load * amp * sum;
}

double terzaghi_first_step_pressure(const TerzaghiSolution& sol, double dt, double y) {
  if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
  if (!(y >= 0.0 && y <= sol.height)) throw ArgumentError("y outside [0, h]");
  const double L = std::sqrt(sol.cv * dt);
  const double h = sol.height;
  // cosh(y/L) / cosh(h/L) without overflow.
  const double ratio = std::exp((y - h) / L) * (1.0 + std::exp(-2.0 * y / L)) / (1.0 + std::exp(-2.0 * h / L));
  return sol.load * (1.0 - ratio);
}

double relative_l2_error(const std::function<double(std::size_t)>& numerical,
                         const std::function<double(const Eigen::Vector2d&)>& exact,
                         std::span<const PhysicalPoint> points) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t q = 0; q < points.size(); ++q) {
    const double pe = exact(points[q].x);
    const double d = numerical(q) - pe;
    num += points[q].weight * d * d;
    den += points[q].weight * pe * pe;
  }
  if (!(den > 0.0)) throw DomainError("exact solution has zero L2 norm");
  return std::sqrt(num / den);
}

double relative_profile_error(std::span<const double> numerical, std::span<const double> exact) {
  if (numerical.size() != exact.size()) throw ArgumentError("profile sizes differ");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    num += (numerical[i] - exact[i]) * (numerical[i] - exact[i]);
    den += exact[i] * exact[i];
  }
  if (!(den > 0.0)) throw DomainError("exact profile is zero");
  return std::sqrt(num / den);
}

OscillationReport oscillation_metrics(std::span<const std::pair<double, double>> profile, double p0,
                                      double noise_floor) {
  OscillationReport r;
  if (profile.empty()) return r;
  double lo = profile.front().second;
  double hi = lo;
  for (const auto& [y, p] : profile) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  const double over = hi / p0 - 1.0;
  const double under = -lo / p0;
  r.overshoot = over > noise_floor ? over : 0.0;
  r.undershoot = under > noise_floor ? under : 0.0;

  const double floor = noise_floor * std::abs(p0);
  int last_sign = 0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double d = profile[i + 1].second - profile[i].second;
    if (std::abs(d) <= floor) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) {
      ++r.violations;
      r.violation_positions.push_back(profile[i].first);
    }
    last_sign = sign;
  }
  return r;
}

double fit_convergence_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw ArgumentError("slope fit needs at least three points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [n, e] : points) {
    if (!(n > 0.0 && e > 0.0)) throw ArgumentError("slope fit needs positive values");
    const double x = std::log(n);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const bool distinct = std::any_of(points.begin(), points.end(),
                                    [&](const auto& q) { return q.first != points.front().first; });
  if (!distinct) throw ArgumentError("slope fit needs distinct N values");
  const double m = static_cast<double>(points.size());
  const double det = m * sxx - sx * sx;
  if (!(det > 0.0)) throw ArgumentError("slope fit needs distinct N values");
  return (m * sxy - sx * sy) / det;
}

}  // namespace poroiga
