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

#include "dpci/estimators.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "absl/strings/str_cat.h"
#include "dpci/status_macros.h"

namespace dpci {
namespace {

// sqrt(pi / 2): standard deviation over mean absolute deviation for normals.
constexpr double kSdPerMad = 1.2533141373155002512;

absl::Status RequireSplitBudget(const PrivacyBudget& budget) {
  DPCI_RETURN_IF_ERROR(ValidateBudget(budget));
  if (budget.rho <= 0 || budget.rho >= 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "rho must lie strictly between 0 and 1, got ", budget.rho));
  }
  return absl::OkStatus();
}

absl::Status RequireSize(std::span<const double> values, int64_t min_size,
                         absl::string_view method) {
  if (static_cast<int64_t>(values.size()) < min_size) {
    return absl::FailedPreconditionError(
        absl::StrCat(method, " needs at least ", min_size, " values, got ",
                     values.size()));
  }
  return absl::OkStatus();
}

absl::Status RequireClamped(std::span<const double> values,
                            const DataBounds& bounds) {
  DPCI_RETURN_IF_ERROR(ValidateBounds(bounds));
  for (double v : values) {
    if (!bounds.Contains(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("value ", v, " lies outside the bounds; clamp first"));
    }
  }
  return absl::OkStatus();
}

std::vector<double> Sorted(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// |x_i - c| for ascending x, produced in ascending order by merging the two
// monotone halves on either side of c.
std::vector<double> SortedDeviations(std::span<const double> sorted,
                                     double c) {
  const auto split = std::lower_bound(sorted.begin(), sorted.end(), c);
  auto left = std::make_reverse_iterator(split);
  const auto left_end = sorted.rend();
  auto right = split;
  std::vector<double> out;
  out.reserve(sorted.size());
  while (left != left_end || right != sorted.end()) {
    if (right == sorted.end() ||
        (left != left_end && c - *left <= *right - c)) {
      out.push_back(c - *left++);
    } else {
      out.push_back(*right++ - c);
    }
  }
  return out;
}

}  // namespace

EstimatorParams EstimatorParams::Defaults(Method method) {
  switch (method) {
    case Method::kNoisyVar:
      return {.rho = 0.8, .b = 0.35};
    case Method::kNoisyMad:
      return {.rho = 0.85, .b = 0.35};
    case Method::kCenQ:
      return {.rho = 0.5, .b = 0.65};
    case Method::kSymQ:
      return {.rho = 0.5, .b = 0.35};
    default:
      return {.rho = 0.5, .b = 0.35};
  }
}

absl::StatusOr<CenterSpread> NoisyVar(std::span<const double> values,
                                      const PrivacyBudget& budget,
                                      const DataBounds& bounds,
                                      RandomSource& rng,
                                      PrivacyLedger* ledger) {
  DPCI_RETURN_IF_ERROR(RequireSplitBudget(budget));
  DPCI_RETURN_IF_ERROR(RequireSize(values, 2, "noisyvar"));
  DPCI_RETURN_IF_ERROR(RequireClamped(values, bounds));
  const auto n = static_cast<int64_t>(values.size());
  DPCI_ASSIGN_OR_RETURN(const double mean, SampleMean(values));
  DPCI_ASSIGN_OR_RETURN(const double variance, SampleVariance(values));
  DPCI_ASSIGN_OR_RETURN(const double mean_sens, MeanSensitivity(bounds, n));
  DPCI_ASSIGN_OR_RETURN(const double var_sens, VarianceSensitivity(bounds, n));

  CenterSpread out;
  DPCI_ASSIGN_OR_RETURN(
      out.center, LaplaceMechanism(mean, mean_sens, budget.rho * budget.epsilon,
                                   rng, ledger, "noisyvar.mean"));
  DPCI_ASSIGN_OR_RETURN(
      const double noisy_var,
      LaplaceMechanism(variance, var_sens, (1 - budget.rho) * budget.epsilon,
                       rng, ledger, "noisyvar.variance"));
  out.spread_floored = noisy_var < 0;
  out.spread = std::sqrt(std::max(0.0, noisy_var));
  return out;
}

absl::StatusOr<CenterSpread> NoisyMad(std::span<const double> values,
                                      const PrivacyBudget& budget,
                                      const DataBounds& bounds,
                                      RandomSource& rng,
                                      PrivacyLedger* ledger) {
  DPCI_RETURN_IF_ERROR(RequireSplitBudget(budget));
  DPCI_RETURN_IF_ERROR(RequireSize(values, 1, "noisymad"));
  DPCI_RETURN_IF_ERROR(RequireClamped(values, bounds));
  const auto n = static_cast<double>(values.size());
  DPCI_ASSIGN_OR_RETURN(const double mean, SampleMean(values));
  DPCI_ASSIGN_OR_RETURN(const double mad, MeanAbsDeviation(values));

  CenterSpread out;
  DPCI_ASSIGN_OR_RETURN(
      out.center,
      LaplaceMechanism(mean, bounds.width() / n, budget.rho * budget.epsilon,
                       rng, ledger, "noisymad.mean"));
  // The deviation sum has sensitivity 2 (xmax - xmin); divided by n here.
  DPCI_ASSIGN_OR_RETURN(
      const double noisy_mad,
      LaplaceMechanism(mad, MadSumSensitivity(bounds) / n,
                       (1 - budget.rho) * budget.epsilon, rng, ledger,
                       "noisymad.mad"));
  out.spread_floored = noisy_mad < 0;
  out.spread = kSdPerMad * std::max(0.0, noisy_mad);
  return out;
}

absl::StatusOr<CenterSpread> CenQ(std::span<const double> values,
                                  const PrivacyBudget& budget, double b,
                                  const DataBounds& bounds, RandomSource& rng,
                                  PrivacyLedger* ledger) {
  DPCI_RETURN_IF_ERROR(RequireSplitBudget(budget));
  if (!(b > 0.5 && b < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cenq needs 0.5 < b < 1, got ", b));
  }
  DPCI_RETURN_IF_ERROR(RequireSize(values, 2, "cenq"));
  DPCI_RETURN_IF_ERROR(RequireClamped(values, bounds));
  const auto n = static_cast<int64_t>(values.size());
  const std::vector<double> sorted = Sorted(values);
  DPCI_ASSIGN_OR_RETURN(const double z, NormalQuantile(b));

  CenterSpread out;
  DPCI_ASSIGN_OR_RETURN(out.center,
                        ExpqSorted(sorted, MedianRank(n),
                                   budget.rho * budget.epsilon, bounds, rng,
                                   ledger));
  DPCI_ASSIGN_OR_RETURN(const double upper,
                        ExpqSorted(sorted, RankForFraction(b, n),
                                   (1 - budget.rho) * budget.epsilon, bounds,
                                   rng, ledger));
  const double raw = (upper - out.center) / z;
  out.spread_floored = raw < 0;
  out.spread = std::max(0.0, raw);
  return out;
}

absl::StatusOr<CenterSpread> SymQ(std::span<const double> values,
                                  double epsilon, double b,
                                  const DataBounds& bounds, RandomSource& rng,
                                  PrivacyLedger* ledger) {
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError("epsilon must be finite and positive");
  }
  if (!(b > 0 && b < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("symq needs 0 < b < 0.5, got ", b));
  }
  DPCI_RETURN_IF_ERROR(RequireSize(values, 2, "symq"));
  DPCI_RETURN_IF_ERROR(RequireClamped(values, bounds));
  const auto n = static_cast<int64_t>(values.size());
  const std::vector<double> sorted = Sorted(values);
  DPCI_ASSIGN_OR_RETURN(const double z, NormalQuantile(1 - b));

  DPCI_ASSIGN_OR_RETURN(const double lower,
                        ExpqSorted(sorted, RankForFraction(b, n), epsilon / 2,
                                   bounds, rng, ledger));
  DPCI_ASSIGN_OR_RETURN(const double upper,
                        ExpqSorted(sorted, RankForFraction(1 - b, n),
                                   epsilon / 2, bounds, rng, ledger));
  CenterSpread out;
  out.center = (lower + upper) / 2;
  const double raw = (upper - out.center) / z;
  out.spread_floored = raw < 0;
  out.spread = std::max(0.0, raw);
  return out;
}

absl::StatusOr<CenterSpread> ModDev(std::span<const double> values,
                                    const PrivacyBudget& budget,
                                    const DataBounds& bounds,
                                    RandomSource& rng,
                                    PrivacyLedger* ledger) {
  DPCI_RETURN_IF_ERROR(RequireSplitBudget(budget));
  DPCI_RETURN_IF_ERROR(RequireSize(values, 1, "mod"));
  DPCI_RETURN_IF_ERROR(RequireClamped(values, bounds));
  const auto n = static_cast<int64_t>(values.size());
  const std::vector<double> sorted = Sorted(values);
  DPCI_ASSIGN_OR_RETURN(const double z, NormalQuantile(0.75));

  CenterSpread out;
  DPCI_ASSIGN_OR_RETURN(out.center,
                        ExpqSorted(sorted, MedianRank(n),
                                   budget.rho * budget.epsilon, bounds, rng,
                                   ledger));
  // No deviation can exceed the distance from the center to the farther
  // bound, so that distance is a data-independent upper limit.
  const DataBounds deviation_bounds{
      0.0, std::max(out.center - bounds.xmin, bounds.xmax - out.center)};
  const std::vector<double> deviations = SortedDeviations(sorted, out.center);
  DPCI_ASSIGN_OR_RETURN(const double mid_deviation,
                        ExpqSorted(deviations, MedianRank(n),
                                   (1 - budget.rho) * budget.epsilon,
                                   deviation_bounds, rng, ledger));
  out.spread = mid_deviation / z;
  return out;
}

bool IsPrivateEstimator(Method method) {
  switch (method) {
    case Method::kNoisyVar:
    case Method::kNoisyMad:
    case Method::kCenQ:
    case Method::kSymQ:
    case Method::kMod:
      return true;
    default:
      return false;
  }
}

absl::Status ValidateEstimatorConfig(const EstimatorConfig& config) {
  if (!IsPrivateEstimator(config.method)) {
    return absl::InvalidArgumentError(absl::StrCat(
        MethodName(config.method), " is not a private center/spread estimator"));
  }
  DPCI_RETURN_IF_ERROR(ValidateBounds(config.bounds));
  const PrivacyBudget budget{config.epsilon, config.params.rho};
  switch (config.method) {
    case Method::kSymQ:
      DPCI_RETURN_IF_ERROR(ValidateBudget({config.epsilon, 0.5}));
      if (!(config.params.b > 0 && config.params.b < 0.5)) {
        return absl::InvalidArgumentError(
            absl::StrCat("symq needs 0 < b < 0.5, got ", config.params.b));
      }
      return absl::OkStatus();
    case Method::kCenQ:
      DPCI_RETURN_IF_ERROR(RequireSplitBudget(budget));
      if (!(config.params.b > 0.5 && config.params.b < 1)) {
        return absl::InvalidArgumentError(
            absl::StrCat("cenq needs 0.5 < b < 1, got ", config.params.b));
      }
      return absl::OkStatus();
    default:
      return RequireSplitBudget(budget);
  }
}

int64_t MinimumSize(Method method) {
  switch (method) {
    case Method::kNoisyMad:
    case Method::kMod:
      return 1;
    case Method::kOra:
      return 4;
    default:
      return 2;
  }
}

absl::StatusOr<CenterSpread> Estimate(const EstimatorConfig& config,
                                      std::span<const double> values,
                                      RandomSource& rng,
                                      PrivacyLedger* ledger) {
  const PrivacyBudget budget{config.epsilon, config.params.rho};
  switch (config.method) {
    case Method::kNoisyVar:
      return NoisyVar(values, budget, config.bounds, rng, ledger);
    case Method::kNoisyMad:
      return NoisyMad(values, budget, config.bounds, rng, ledger);
    case Method::kCenQ:
      return CenQ(values, budget, config.params.b, config.bounds, rng, ledger);
    case Method::kSymQ:
      return SymQ(values, config.epsilon, config.params.b, config.bounds, rng,
                  ledger);
    case Method::kMod:
      return ModDev(values, budget, config.bounds, rng, ledger);
    default:
      return absl::InvalidArgumentError(absl::StrCat(
          MethodName(config.method),
          " is not a private center/spread estimator"));
  }
}

}  // namespace dpci
