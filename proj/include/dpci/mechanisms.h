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

// The two differential-privacy primitives: the Laplace mechanism and the
// exponential-mechanism quantile sampler, plus exact analytic descriptions of
// the sampler's output law (density, bin probabilities, expectation).
//
// The quantile sampler splits [xmin, xmax) into bins at the sorted data
// values, B_i = [x_i, x_{i+1}) for i = 0..n with x_0 = xmin, x_{n+1} = xmax.
// For a target rank m the utility of bin i is i + 1 - m below m and m - i
// from m upwards, so bins m - 1 and m (either side of x_m) score 0. A bin is
// chosen with probability proportional to |B_i| * exp(epsilon / 2 * u_i) and
// the output is uniform inside it.

#ifndef DPCI_MECHANISMS_H_
#define DPCI_MECHANISMS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpci/core.h"
#include "dpci/random.h"

namespace dpci {

// Records every budget charge made against real data. Estimators take an
// optional ledger; tests use it to check that sub-query costs add up.
class PrivacyLedger {
 public:
  struct Charge {
    std::string label;
    double epsilon;
  };

  void Record(absl::string_view label, double epsilon);
  double Total() const;
  const std::vector<Charge>& charges() const { return charges_; }
  void Clear() { charges_.clear(); }

 private:
  std::vector<Charge> charges_;
};

// Inverse-CDF transform: -scale * sgn(u - 1/2) * ln(1 - 2|u - 1/2|).
double LaplaceFromUniform(double u, double scale);

// One Laplace(0, scale) draw; scale 0 yields exactly 0.
absl::StatusOr<double> LaplaceDraw(double scale, RandomSource& rng);

// value + Lap(sensitivity / epsilon), charged to `ledger` when given.
absl::StatusOr<double> LaplaceMechanism(double value, double sensitivity,
                                        double epsilon, RandomSource& rng,
                                        PrivacyLedger* ledger,
                                        absl::string_view label);

// 1-based rank into the sorted database.
struct QuantileRank {
  int64_t value = 1;
};

// floor(b * (n - 1) + 1), evaluated in double precision.
QuantileRank RankForFraction(double b, int64_t n);
// floor((n + 1) / 2).
QuantileRank MedianRank(int64_t n);

struct BinLayout {
  // n + 2 edges: xmin, the sorted values, xmax.
  std::vector<double> edges;
  // n + 1 per-bin utilities.
  std::vector<int64_t> utilities;

  std::size_t bin_count() const { return utilities.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  // log|B_i| + epsilon / 2 * u_i; -inf for zero-width bins.
  std::vector<double> LogWeights(double epsilon) const;
  // Normalised selection probabilities, computed in log space.
  std::vector<double> Probabilities(double epsilon) const;
};

// Sorts internally; values must already lie inside `bounds`.
absl::StatusOr<BinLayout> BuildBins(std::span<const double> values,
                                    const DataBounds& bounds,
                                    QuantileRank rank);

// Draws one private quantile estimate. `values` need not be sorted.
absl::StatusOr<double> Expq(std::span<const double> values, QuantileRank rank,
                            double epsilon, const DataBounds& bounds,
                            RandomSource& rng, PrivacyLedger* ledger = nullptr);

// Same as Expq for input that is already ascending (checked).
absl::StatusOr<double> ExpqSorted(std::span<const double> sorted,
                                  QuantileRank rank, double epsilon,
                                  const DataBounds& bounds, RandomSource& rng,
                                  PrivacyLedger* ledger = nullptr);

// Index of the bin the sampler picked, exposed for goodness-of-fit tests.
// `sorted` must be ascending and inside `bounds`.
absl::StatusOr<std::size_t> ExpqSelectBin(std::span<const double> sorted,
                                          QuantileRank rank, double epsilon,
                                          const DataBounds& bounds,
                                          RandomSource& rng);

// Exact output density at y in [xmin, xmax).
absl::StatusOr<double> ExpqExactDensity(std::span<const double> values,
                                        QuantileRank rank, double epsilon,
                                        const DataBounds& bounds, double y);

// Exact expected output: sum_i p_i * (x_{i+1} + x_i) / 2.
absl::StatusOr<double> ExpqExpectedValue(std::span<const double> values,
                                         QuantileRank rank, double epsilon,
                                         const DataBounds& bounds);

}  // namespace dpci

#endif  // DPCI_MECHANISMS_H_
