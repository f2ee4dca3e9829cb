#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "poroiga/assembly.hpp"

namespace poroiga {

/// Fourier series of the one-dimensional consolidation problem with a
/// drained top at y = h and an impervious bottom at y = 0.
struct TerzaghiSolution {
  double load = 1.0;     // p0
  double height = 1.0;   // h
  double cv = 1.0;       // consolidation coefficient
  double tolerance = 1e-12;
  long max_terms = 1'000'000;
};

/// p(t, y). Throws ArgumentError for t <= 0 or y outside [0, h].
double terzaghi_pressure(const TerzaghiSolution& sol, double t, double y);

/// Pressure after one backward Euler step of the continuous-in-space problem
/// started from the undrained state: p0 (1 - cosh(y / L) / cosh(h / L)) with
/// L = sqrt(c_v dt).
double terzaghi_first_step_pressure(const TerzaghiSolution& sol, double dt, double y);

/// ||p_h - p|| / ||p|| in L2 over the domain, integrated with the given
/// physical quadrature points. Throws DomainError when ||p|| = 0.
double relative_l2_error(const std::function<double(std::size_t)>& numerical,
                         const std::function<double(const Eigen::Vector2d&)>& exact,
                         std::span<const PhysicalPoint> points);

/// Discrete relative 2-norm error of two equally sized samples.
double relative_profile_error(std::span<const double> numerical, std::span<const double> exact);

struct OscillationReport {
  double overshoot = 0.0;   // max(p / p0) - 1, clipped at 0
  double undershoot = 0.0;  // -min(p / p0), clipped at 0
  int violations = 0;       // sign changes of the discrete slope
  std::vector<double> violation_positions;  // y where the slope changes sign

  bool clean() const { return overshoot == 0.0 && undershoot == 0.0 && violations == 0; }
};

/// Profile of (y, p) pairs sorted by y. Slope sign changes are counted only
/// for increments above noise_floor * p0.
OscillationReport oscillation_metrics(std::span<const std::pair<double, double>> profile, double p0,
                                      double noise_floor = 1e-8);

/// Least-squares slope of log(error) against log(N). Needs at least three
/// points with positive N and error.
double fit_convergence_slope(std::span<const std::pair<double, double>> points);

}  // namespace poroiga
