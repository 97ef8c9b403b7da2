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

// Data model, classical sample statistics, sensitivity constants, distribution
// quantiles and the public (non-private) t interval.

#ifndef DPCI_CORE_H_
#define DPCI_CORE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace dpci {

// Analyst-declared clamp window. Clamping uses the closed interval
// [xmin, xmax]; private quantile outputs live in [xmin, xmax).
struct DataBounds {
  double xmin = 0.0;
  double xmax = 1.0;

  double width() const { return xmax - xmin; }
  bool Contains(double v) const { return v >= xmin && v <= xmax; }
};

absl::Status ValidateBounds(const DataBounds& bounds);

// Total privacy budget plus the fraction `rho` given to the first sub-query.
struct PrivacyBudget {
  double epsilon = 1.0;
  double rho = 0.5;
};

absl::Status ValidateBudget(const PrivacyBudget& budget);

// A private (center, spread) pair; every estimator produces one.
struct CenterSpread {
  double center = 0.0;
  double spread = 0.0;
  // Set when the max(0, .) floor on the spread was hit or the input was too
  // small to measure spread at all.
  bool spread_floored = false;
};

// Every interval construction the toolkit knows about.
enum class Method : std::uint8_t {
  kNoisyVar,
  kNoisyMad,
  kCenQ,
  kSymQ,
  kMod,
  kPublic,
  kOra,
  kVadhan,
};

absl::string_view MethodName(Method method);
absl::StatusOr<Method> ParseMethod(absl::string_view name);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double moe = 0.0;
  double alpha = 0.05;
  Method method = Method::kPublic;
  std::uint64_t seed = 0;
  int nsim = 0;
  // Point estimates the interval was built around.
  double center = 0.0;
  double spread = 0.0;
  bool spread_floored = false;

  bool Covers(double value) const { return lower <= value && value <= upper; }
};

// Owned, validated observations: non-empty and all finite.
class Database {
 public:
  static absl::StatusOr<Database> Create(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  explicit Database(std::vector<double> values) : values_(std::move(values)) {}

  std::vector<double> values_;
};

std::vector<double> Clamp(std::span<const double> values,
                          const DataBounds& bounds);
void ClampInPlace(std::span<double> values, const DataBounds& bounds);

absl::StatusOr<double> SampleMean(std::span<const double> values);
// Unbiased (n - 1) sample variance.
absl::StatusOr<double> SampleVariance(std::span<const double> values);
// (1/n) * sum |x_i - mean|.
absl::StatusOr<double> MeanAbsDeviation(std::span<const double> values);

// Neighbouring-database sensitivities for bounded data.
absl::StatusOr<double> MeanSensitivity(const DataBounds& bounds, int64_t n);
absl::StatusOr<double> VarianceSensitivity(const DataBounds& bounds,
                                           int64_t n);
// Sensitivity of sum |x_i - mean| (not divided by n).
double MadSumSensitivity(const DataBounds& bounds);

// Standard normal inverse CDF.
absl::StatusOr<double> NormalQuantile(double p);
// Student-t inverse CDF with `df` degrees of freedom.
absl::StatusOr<double> StudentTQuantile(double p, int64_t df);

// Linear interpolation between order statistics at plotting positions
// (i - 1) / (n - 1). `sorted` must be ascending.
absl::StatusOr<double> EmpiricalQuantileSorted(std::span<const double> sorted,
                                               double p);
absl::StatusOr<double> EmpiricalQuantile(std::span<const double> values,
                                         double p);

// Classical mean +- (s / sqrt(n)) * t_{n-1}(1 - alpha / 2).
absl::StatusOr<ConfidenceInterval> PublicCi(std::span<const double> values,
                                            double alpha);

}  // namespace dpci

#endif  // DPCI_CORE_H_
