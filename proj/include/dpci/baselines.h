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

// Two comparison methods from earlier work.
//
// VadhanCi is the pure-DP Karwa-Vadhan interval: find a range, clamp, add
// Laplace noise to the mean and to a deliberately inflated variance, and
// widen the t interval by a noise term.
//
// OraEstimate is the subsample-and-aggregate standard-error estimator of
// D'Orazio, Honaker and King adapted to a single mean. It yields a
// CenterSpread and is turned into an interval through SimCi like the other
// estimators.

#ifndef DPCI_BASELINES_H_
#define DPCI_BASELINES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpci/core.h"
#include "dpci/mechanisms.h"
#include "dpci/random.h"

namespace dpci {

struct VadhanParams {
  double alpha0 = 0.0125;  // t-interval miss probability
  double alpha1 = 0.0125;  // mean-noise miss probability
  double alpha2 = 0.0125;  // variance-noise miss probability
  double alpha3 = 0.0125;  // range-finder miss probability
  double eps1 = 0.5;
  double eps2 = 0.5;
  double eps3 = 0.0;
  // A priori limits on the population mean and standard deviation.
  double mean_min = -1.0;
  double mean_max = 1.0;
  double sd_min = 1e-3;
  double sd_max = 1.0;

  // Splits alpha four ways and epsilon evenly between the mean and the
  // variance. Mean limits are `bounds`; sd limits are [width / 1000,
  // width / 4].
  static VadhanParams EqualSplit(double alpha, double epsilon,
                                 const DataBounds& bounds);
};

absl::Status ValidateVadhanParams(const VadhanParams& params);

// Produces the clamp window used by VadhanCi.
class RangeFinder {
 public:
  struct Result {
    DataBounds range;
    // Budget consumed looking at the data; charged to the ledger.
    double epsilon_spent = 0.0;
  };

  virtual ~RangeFinder() = default;
  virtual absl::StatusOr<Result> FindRange(std::span<const double> values,
                                           const VadhanParams& params,
                                           RandomSource& rng) = 0;
};

// Data-independent window [mean_min - t, mean_max + t] with
// t = sd_max * sqrt(2 ln(2n / alpha3)). For normal data inside the declared
// mean and sd limits, all n points land inside with probability at least
// 1 - alpha3. Spends no budget.
class TailBoundRangeFinder final : public RangeFinder {
 public:
  absl::StatusOr<Result> FindRange(std::span<const double> values,
                                   const VadhanParams& params,
                                   RandomSource& rng) override;
};

// Uses the given range as-is. Spends no budget.
class FixedRangeFinder final : public RangeFinder {
 public:
  explicit FixedRangeFinder(DataBounds range) : range_(range) {}
  absl::StatusOr<Result> FindRange(std::span<const double> values,
                                   const VadhanParams& params,
                                   RandomSource& rng) override;

 private:
  DataBounds range_;
};

// When `range_finder` is null a TailBoundRangeFinder is used. A noisy
// variance below zero is floored and reported through spread_floored.
absl::StatusOr<ConfidenceInterval> VadhanCi(std::span<const double> values,
                                            const VadhanParams& params,
                                            RandomSource& rng,
                                            PrivacyLedger* ledger = nullptr,
                                            RangeFinder* range_finder = nullptr);

struct OraParams {
  // Number of subsets; 0 means floor(n / 2), i.e. pairs.
  int64_t subsets = 0;
  // A priori bound on the population standard deviation; 0 means half the
  // data range.
  double sd_max = 0.0;
};

// Intermediate quantities, exposed for tests.
struct OraTrace {
  int64_t subsets = 0;
  std::vector<double> standard_errors;  // after winsorizing
  DataBounds quartile_bounds;
  double lower_quartile = 0.0;
  double upper_quartile = 0.0;
  double winsor_low = 0.0;
  double winsor_high = 0.0;
  double winsorized_mean = 0.0;
};

// Splits `values` (already clamped to `bounds`) into contiguous subsets, the
// remainder joining the last one. Every subset needs at least 2 rows, so
// subsets <= n / 2.
absl::StatusOr<std::vector<std::span<const double>>> PartitionSubsets(
    std::span<const double> values, int64_t subsets);

// The noise scales follow the algorithm listing: 2 (xmax - xmin) / (eps n)
// on the mean, eps / 4 per quartile and 2 |u - l| / (eps M) on the
// winsorized mean. The spread is the standard-error estimate times sqrt(n),
// floored at 0.
absl::StatusOr<CenterSpread> OraEstimate(std::span<const double> values,
                                         double epsilon,
                                         const DataBounds& bounds,
                                         const OraParams& params,
                                         RandomSource& rng,
                                         PrivacyLedger* ledger = nullptr,
                                         OraTrace* trace = nullptr);

}  // namespace dpci

#endif  // DPCI_BASELINES_H_
