#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "poroiga/splines.hpp"

namespace testing_support {

constexpr unsigned kSeed = 1234567u;

// Cox-de Boor recursion straight from the definition.
inline double cox_de_boor(const poroiga::KnotVector& kv, int i, int p, double xi) {
  const auto u = kv.knots();
  if (p == 0) {
    if (u[i] <= xi && xi < u[i + 1]) return 1.0;
    if (xi == kv.back() && u[i] < u[i + 1] && u[i + 1] == kv.back()) return 1.0;
    return 0.0;
  }
  double v = 0.0;
  if (u[i + p] > u[i]) v += (xi - u[i]) / (u[i + p] - u[i]) * cox_de_boor(kv, i, p - 1, xi);
  if (u[i + p + 1] > u[i + 1]) v += (u[i + p + 1] - xi) / (u[i + p + 1] - u[i + 1]) * cox_de_boor(kv, i + 1, p - 1, xi);
  return v;
}

// First derivative by the standard two-term formula on degree p - 1.
inline double cox_de_boor_derivative(const poroiga::KnotVector& kv, int i, int p, double xi) {
  const auto u = kv.knots();
  double v = 0.0;
  if (u[i + p] > u[i]) v += p / (u[i + p] - u[i]) * cox_de_boor(kv, i, p - 1, xi);
  if (u[i + p + 1] > u[i + 1]) v -= p / (u[i + p + 1] - u[i + 1]) * cox_de_boor(kv, i + 1, p - 1, xi);
  return v;
}

// Open knot vector with random spans and interior multiplicities in [1, p].
inline poroiga::KnotVector random_knot_vector(std::mt19937& rng, int p, int max_spans = 6) {
  std::uniform_int_distribution<int> spans(1, max_spans);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = spans(rng);
  std::vector<double> breaks{unit(rng) - 0.5};
  for (int s = 0; s < n; ++s) breaks.push_back(breaks.back() + 0.1 + unit(rng));
  std::vector<double> knots(static_cast<std::size_t>(p + 1), breaks.front());
  std::uniform_int_distribution<int> mult(1, std::max(1, p));
  for (std::size_t k = 1; k + 1 < breaks.size(); ++k)
    for (int m = mult(rng); m > 0; --m) knots.push_back(breaks[k]);
  knots.insert(knots.end(), static_cast<std::size_t>(p + 1), breaks.back());
  return poroiga::KnotVector(knots, p);
}

inline double random_parameter(std::mt19937& rng, const poroiga::KnotVector& kv) {
  // libstdc++ can round a draw up to the open upper bound.
  std::uniform_real_distribution<double> d(kv.front(), kv.back());
  return std::min(d(rng), kv.back());
}

}  // namespace testing_support
