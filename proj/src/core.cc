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

#include "dpci/core.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "boost/math/distributions/normal.hpp"
#include "boost/math/distributions/students_t.hpp"
#include "dpci/status_macros.h"

namespace dpci {
namespace {

constexpr std::array<std::pair<Method, absl::string_view>, 8> kMethodNames = {{
    {Method::kNoisyVar, "noisyvar"},
    {Method::kNoisyMad, "noisymad"},
    {Method::kCenQ, "cenq"},
    {Method::kSymQ, "symq"},
    {Method::kMod, "mod"},
    {Method::kPublic, "public"},
    {Method::kOra, "ora"},
    {Method::kVadhan, "vadhan"},
}};

absl::Status RequireNonEmpty(std::span<const double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("database must not be empty");
  }
  return absl::OkStatus();
}

double MeanUnchecked(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

absl::Status ValidateBounds(const DataBounds& bounds) {
  if (!std::isfinite(bounds.xmin) || !std::isfinite(bounds.xmax)) {
    return absl::InvalidArgumentError("bounds must be finite");
  }
  if (!(bounds.xmin < bounds.xmax)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bounds require xmin < xmax, got [", bounds.xmin, ", ", bounds.xmax,
        "]"));
  }
  return absl::OkStatus();
}

absl::Status ValidateBudget(const PrivacyBudget& budget) {
  if (!std::isfinite(budget.epsilon) || budget.epsilon <= 0) {
    return absl::InvalidArgumentError("epsilon must be finite and positive");
  }
  if (!(budget.rho >= 0 && budget.rho <= 1)) {
    return absl::InvalidArgumentError("rho must lie in [0, 1]");
  }
  return absl::OkStatus();
}

absl::string_view MethodName(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

absl::StatusOr<Method> ParseMethod(absl::string_view name) {
  for (const auto& [m, known] : kMethodNames) {
    if (known == name) return m;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown method '", name,
                                                 "'"));
}

absl::StatusOr<Database> Database::Create(std::vector<double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("database must not be empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("value at index ", i, " is not finite"));
    }
  }
  return Database(std::move(values));
}

std::vector<double> Clamp(std::span<const double> values,
                          const DataBounds& bounds) {
  std::vector<double> out(values.begin(), values.end());
  ClampInPlace(out, bounds);
  return out;
}

void ClampInPlace(std::span<double> values, const DataBounds& bounds) {
  for (double& v : values) v = std::clamp(v, bounds.xmin, bounds.xmax);
}

absl::StatusOr<double> SampleMean(std::span<const double> values) {
  DPCI_RETURN_IF_ERROR(RequireNonEmpty(values));
  return MeanUnchecked(values);
}

absl::StatusOr<double> SampleVariance(std::span<const double> values) {
  if (values.size() < 2) {
    return absl::FailedPreconditionError(
        "sample variance needs at least 2 values");
  }
  const double mean = MeanUnchecked(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

absl::StatusOr<double> MeanAbsDeviation(std::span<const double> values) {
  DPCI_RETURN_IF_ERROR(RequireNonEmpty(values));
  const double mean = MeanUnchecked(values);
  double sum = 0.0;
  for (double v : values) sum += std::abs(v - mean);
  return sum / static_cast<double>(values.size());
}

absl::StatusOr<double> MeanSensitivity(const DataBounds& bounds, int64_t n) {
  DPCI_RETURN_IF_ERROR(ValidateBounds(bounds));
  if (n < 1) return absl::InvalidArgumentError("n must be at least 1");
  return bounds.width() / static_cast<double>(n);
}

absl::StatusOr<double> VarianceSensitivity(const DataBounds& bounds,
                                           int64_t n) {
  DPCI_RETURN_IF_ERROR(ValidateBounds(bounds));
  if (n < 2) return absl::InvalidArgumentError("n must be at least 2");
  return bounds.width() * bounds.width() / static_cast<double>(n);
}

double MadSumSensitivity(const DataBounds& bounds) {
  return 2.0 * bounds.width();
}

absl::StatusOr<double> NormalQuantile(double p) {
  if (!(p > 0 && p < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("normal quantile needs 0 < p < 1, got ", p));
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

absl::StatusOr<double> StudentTQuantile(double p, int64_t df) {
  if (!(p > 0 && p < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("t quantile needs 0 < p < 1, got ", p));
  }
  if (df < 1) {
    return absl::InvalidArgumentError("t quantile needs df >= 1");
  }
  return boost::math::quantile(
      boost::math::students_t_distribution<double>(static_cast<double>(df)),
      p);
}

absl::StatusOr<double> EmpiricalQuantileSorted(std::span<const double> sorted,
                                               double p) {
  DPCI_RETURN_IF_ERROR(RequireNonEmpty(sorted));
  if (!(p >= 0 && p <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("quantile level must lie in [0, 1], got ", p));
  }
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

absl::StatusOr<double> EmpiricalQuantile(std::span<const double> values,
                                         double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return EmpiricalQuantileSorted(sorted, p);
}

absl::StatusOr<ConfidenceInterval> PublicCi(std::span<const double> values,
                                            double alpha) {
  if (!(alpha > 0 && alpha < 1)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 1)");
  }
  if (values.size() < 2) {
    return absl::FailedPreconditionError(
        "the public interval needs at least 2 values");
  }
  const auto n = static_cast<int64_t>(values.size());
  const double mean = MeanUnchecked(values);
  DPCI_ASSIGN_OR_RETURN(const double variance, SampleVariance(values));
  DPCI_ASSIGN_OR_RETURN(const double t, StudentTQuantile(1 - alpha / 2, n - 1));
  const double sd = std::sqrt(variance);
  const double moe = sd / std::sqrt(static_cast<double>(n)) * t;

  ConfidenceInterval ci;
  ci.lower = mean - moe;
  ci.upper = mean + moe;
  ci.moe = moe;
  ci.alpha = alpha;
  ci.method = Method::kPublic;
  ci.center = mean;
  ci.spread = sd;
  return ci;
}

}  // namespace dpci
