// Copyright 2026 The dpci Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test doubles and independent numerical oracles shared by the unit and
// acceptance tests. The oracles deliberately avoid the code paths used by the
// library (Boost quantile functions, the prefix-sum sampler) so agreement
// means something.

#ifndef DPCI_TESTS_TEST_UTIL_H_
#define DPCI_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "dpci/random.h"

namespace dpci::testing {

// Every uniform is 1/2, so every Laplace draw is exactly 0.
class ZeroNoiseRandom final : public RandomSource {
 public:
  double Uniform() override { return 0.5; }
};

// Replays a fixed list of uniforms, cycling when it runs out.
class ScriptedRandom final : public RandomSource {
 public:
  explicit ScriptedRandom(std::vector<double> script)
      : script_(std::move(script)) {}
  double Uniform() override {
    const double u = script_[next_ % script_.size()];
    ++next_;
    return u;
  }
  std::size_t calls() const { return next_; }

 private:
  std::vector<double> script_;
  std::size_t next_ = 0;
};

inline double NormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Bisection on a strictly increasing function until the bracket is below tol.
inline double Bisect(const std::function<double(double)>& f, double target,
                     double lo, double hi, double tol = 1e-13) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double NormalQuantileOracle(double p) {
  return Bisect(NormalCdf, p, -40.0, 40.0);
}

// Student-t CDF from composite Simpson integration of the density on [0, x].
// The substitution t = tan(theta) keeps the integrand bounded for df = 1.
inline double StudentTCdfOracle(double x, double df) {
  const double log_c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) -
                       0.5 * std::log(df * std::numbers::pi);
  auto integrand = [&](double theta) {
    const double t = std::tan(theta);
    const double sec2 = 1 + t * t;
    return std::exp(log_c - (df + 1) / 2 * std::log1p(t * t / df)) * sec2;
  };
  const double upper = std::atan(std::abs(x));
  const int steps = 20000;
  const double h = upper / steps;
  double sum = integrand(0) + integrand(upper);
  for (int i = 1; i < steps; ++i) {
    sum += integrand(i * h) * (i % 2 == 1 ? 4 : 2);
  }
  const double half = sum * h / 3;
  return x >= 0 ? 0.5 + half : 0.5 - half;
}

inline double StudentTQuantileOracle(double p, double df) {
  return Bisect([df](double x) { return StudentTCdfOracle(x, df); }, p, -1e3,
                1e3, 1e-11);
}

// Laplace inverse CDF written out directly from the distribution function.
inline double LaplaceQuantileOracle(double u, double scale) {
  return u < 0.5 ? scale * std::log(2 * u) : -scale * std::log(2 - 2 * u);
}

// Exact bin probabilities of the quantile sampler by brute-force
// normalisation of width * exp(eps / 2 * utility), in plain arithmetic.
inline std::vector<double> BruteForceBinProbabilities(
    std::vector<double> values, long rank, double eps, double xmin,
    double xmax) {
  std::sort(values.begin(), values.end());
  const long n = static_cast<long>(values.size());
  std::vector<double> edges = {xmin};
  edges.insert(edges.end(), values.begin(), values.end());
  edges.push_back(xmax);
  std::vector<double> w(n + 1);
  double total = 0;
  for (long i = 0; i <= n; ++i) {
    const long u = i < rank ? i + 1 - rank : rank - i;
    w[i] = (edges[i + 1] - edges[i]) * std::exp(eps / 2 * u);
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

inline std::vector<std::vector<double>> GridDatabases(
    std::span<const double> grid, int n) {
  std::vector<std::vector<double>> out = {{}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out) {
      for (double g : grid) {
        auto db = prefix;
        db.push_back(g);
        next.push_back(std::move(db));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Calls f(x, x') for every ordered pair of databases on the grid that differ
// in exactly one position.
template <typename F>
void ForEachNeighborPair(std::span<const double> grid, int n, F&& f) {
  for (const auto& db : GridDatabases(grid, n)) {
    for (int pos = 0; pos < n; ++pos) {
      for (double g : grid) {
        if (g == db[pos]) continue;
        auto neighbor = db;
        neighbor[pos] = g;
        f(db, neighbor);
      }
    }
  }
}

}  // namespace dpci::testing

#endif  // DPCI_TESTS_TEST_UTIL_H_
