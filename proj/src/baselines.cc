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

#include "dpci/baselines.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "dpci/status_macros.h"

namespace dpci {
namespace {

bool InOpenUnit(double v) { return v > 0 && v < 1; }

double SubsetSd(std::span<const double> subset) {
  double mean = 0.0;
  for (double v : subset) mean += v;
  mean /= static_cast<double>(subset.size());
  double ss = 0.0;
  for (double v : subset) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(subset.size() - 1));
}

}  // namespace

VadhanParams VadhanParams::EqualSplit(double alpha, double epsilon,
                                      const DataBounds& bounds) {
  VadhanParams p;
  p.alpha0 = p.alpha1 = p.alpha2 = p.alpha3 = alpha / 4;
  p.eps1 = p.eps2 = epsilon / 2;
  p.eps3 = 0.0;
  p.mean_min = bounds.xmin;
  p.mean_max = bounds.xmax;
  p.sd_min = bounds.width() / 1000;
  p.sd_max = bounds.width() / 4;
  return p;
}

absl::Status ValidateVadhanParams(const VadhanParams& p) {
  if (!InOpenUnit(p.alpha0) || !InOpenUnit(p.alpha1) || !InOpenUnit(p.alpha2) ||
      !InOpenUnit(p.alpha3)) {
    return absl::InvalidArgumentError("alpha0..alpha3 must lie in (0, 1)");
  }
  if (!(p.eps1 > 0) || !(p.eps2 > 0) || !(p.eps3 >= 0) ||
      !std::isfinite(p.eps1 + p.eps2 + p.eps3)) {
    return absl::InvalidArgumentError(
        "eps1 and eps2 must be positive and eps3 non-negative");
  }
  if (!(p.mean_min < p.mean_max) || !std::isfinite(p.mean_max - p.mean_min)) {
    return absl::InvalidArgumentError("mean limits require mean_min < mean_max");
  }
  if (!(p.sd_min > 0) || !(p.sd_min <= p.sd_max) || !std::isfinite(p.sd_max)) {
    return absl::InvalidArgumentError("sd limits require 0 < sd_min <= sd_max");
  }
  return absl::OkStatus();
}

absl::StatusOr<RangeFinder::Result> TailBoundRangeFinder::FindRange(
    std::span<const double> values, const VadhanParams& params,
    RandomSource& /*rng*/) {
  const auto n = static_cast<double>(values.size());
  const double reach =
      params.sd_max * std::sqrt(2 * std::log(2 * n / params.alpha3));
  return Result{{params.mean_min - reach, params.mean_max + reach}, 0.0};
}

absl::StatusOr<RangeFinder::Result> FixedRangeFinder::FindRange(
    std::span<const double> /*values*/, const VadhanParams& /*params*/,
    RandomSource& /*rng*/) {
  DPCI_RETURN_IF_ERROR(ValidateBounds(range_));
  return Result{range_, 0.0};
}

absl::StatusOr<ConfidenceInterval> VadhanCi(std::span<const double> values,
                                            const VadhanParams& params,
                                            RandomSource& rng,
                                            PrivacyLedger* ledger,
                                            RangeFinder* range_finder) {
  DPCI_RETURN_IF_ERROR(ValidateVadhanParams(params));
  if (values.size() < 2) {
    return absl::FailedPreconditionError("vadhan needs at least 2 values");
  }
  TailBoundRangeFinder default_finder;
  RangeFinder& finder =
      range_finder != nullptr ? *range_finder : default_finder;
  DPCI_ASSIGN_OR_RETURN(const RangeFinder::Result found,
                        finder.FindRange(values, params, rng));
  DPCI_RETURN_IF_ERROR(ValidateBounds(found.range));
  if (ledger != nullptr) ledger->Record("vadhan.range", found.epsilon_spent);

  const std::vector<double> clamped = Clamp(values, found.range);
  const auto n = static_cast<int64_t>(clamped.size());
  const double nd = static_cast<double>(n);
  const double width = found.range.width();
  const double mean_scale = width / (params.eps1 * nd);
  const double var_scale = width * width / (params.eps2 * (nd - 1));

  DPCI_ASSIGN_OR_RETURN(const double mean, SampleMean(clamped));
  DPCI_ASSIGN_OR_RETURN(const double variance, SampleVariance(clamped));
  DPCI_ASSIGN_OR_RETURN(const double mean_noise, LaplaceDraw(mean_scale, rng));
  if (ledger != nullptr) ledger->Record("vadhan.mean", params.eps1);
  DPCI_ASSIGN_OR_RETURN(const double var_noise, LaplaceDraw(var_scale, rng));
  if (ledger != nullptr) ledger->Record("vadhan.variance", params.eps2);

  const double noisy_var =
      variance + var_scale * std::log(1 / (2 * params.alpha2)) + var_noise;
  DPCI_ASSIGN_OR_RETURN(const double t,
                        StudentTQuantile(1 - params.alpha0 / 2, n - 1));

  ConfidenceInterval ci;
  ci.method = Method::kVadhan;
  ci.alpha = params.alpha0 + params.alpha1 + params.alpha2 + params.alpha3;
  ci.center = mean + mean_noise;
  ci.spread_floored = noisy_var < 0;
  ci.spread = std::sqrt(std::max(0.0, noisy_var));
  ci.moe = ci.spread / std::sqrt(nd) * t +
           mean_scale * std::log(1 / params.alpha1);
  ci.lower = ci.center - ci.moe;
  ci.upper = ci.center + ci.moe;
  return ci;
}

absl::StatusOr<std::vector<std::span<const double>>> PartitionSubsets(
    std::span<const double> values, int64_t subsets) {
  const auto n = static_cast<int64_t>(values.size());
  if (subsets < 1) {
    return absl::InvalidArgumentError("need at least one subset");
  }
  if (2 * subsets > n) {
    return absl::InvalidArgumentError(absl::StrCat(
        subsets, " subsets of at least 2 rows need more than ", n, " rows"));
  }
  const int64_t size = n / subsets;
  std::vector<std::span<const double>> out;
  out.reserve(static_cast<std::size_t>(subsets));
  for (int64_t i = 0; i < subsets; ++i) {
    const int64_t begin = i * size;
    const int64_t end = i + 1 == subsets ? n : begin + size;
    out.push_back(values.subspan(static_cast<std::size_t>(begin),
                                 static_cast<std::size_t>(end - begin)));
  }
  return out;
}

absl::StatusOr<CenterSpread> OraEstimate(std::span<const double> values,
                                         double epsilon,
                                         const DataBounds& bounds,
                                         const OraParams& params,
                                         RandomSource& rng,
                                         PrivacyLedger* ledger,
                                         OraTrace* trace) {
  DPCI_RETURN_IF_ERROR(ValidateBounds(bounds));
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError("epsilon must be finite and positive");
  }
  if (params.sd_max < 0 || !std::isfinite(params.sd_max)) {
    return absl::InvalidArgumentError("sd_max must be positive");
  }
  const auto n = static_cast<int64_t>(values.size());
  const int64_t subsets = params.subsets > 0 ? params.subsets : n / 2;
  if (subsets < 2) {
    return absl::FailedPreconditionError(absl::StrCat(
        "ora needs at least 2 subsets of 2 rows; n = ", n));
  }
  for (double v : values) {
    if (!bounds.Contains(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("value ", v, " lies outside the bounds; clamp first"));
    }
  }
  DPCI_ASSIGN_OR_RETURN(const auto parts, PartitionSubsets(values, subsets));

  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(subsets);
  const double sd_max =
      params.sd_max > 0 ? params.sd_max : bounds.width() / 2;

  CenterSpread out;
  DPCI_ASSIGN_OR_RETURN(const double mean, SampleMean(values));
  DPCI_ASSIGN_OR_RETURN(out.center,
                        LaplaceMechanism(mean, bounds.width() / nd,
                                         epsilon / 2, rng, ledger, "ora.mean"));

  const double se_max = sd_max / std::sqrt(nd);
  const DataBounds se_bounds{
      0.0, se_max + 2 * sd_max * std::sqrt(md) / std::sqrt(2 * nd * nd)};
  std::vector<double> se(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    se[i] = SubsetSd(parts[i]) / std::sqrt(nd);
  }
  // The quartile sampler needs its input inside its declared range.
  std::vector<double> se_clamped = Clamp(se, se_bounds);
  std::sort(se_clamped.begin(), se_clamped.end());
  DPCI_ASSIGN_OR_RETURN(const double a,
                        ExpqSorted(se_clamped, RankForFraction(0.25, subsets),
                                   epsilon / 4, se_bounds, rng, ledger));
  DPCI_ASSIGN_OR_RETURN(const double b,
                        ExpqSorted(se_clamped, RankForFraction(0.75, subsets),
                                   epsilon / 4, se_bounds, rng, ledger));
  const double mid = (a + b) / 2;
  const double iqr = std::abs(a - b);
  const double high = mid + 2 * iqr;
  const double low = mid - 2 * iqr;
  double sum = 0.0;
  for (double& s : se) {
    s = std::clamp(s, low, high);
    sum += s;
  }
  const double winsorized_mean = sum / md;
  DPCI_ASSIGN_OR_RETURN(
      const double noisy_se,
      LaplaceMechanism(winsorized_mean, (high - low) / md, epsilon / 2, rng,
                       ledger, "ora.standard_error"));
  out.spread_floored = noisy_se < 0;
  out.spread = std::max(0.0, noisy_se) * std::sqrt(nd);

  if (trace != nullptr) {
    trace->subsets = subsets;
    trace->standard_errors = se;
    trace->quartile_bounds = se_bounds;
    trace->lower_quartile = a;
    trace->upper_quartile = b;
    trace->winsor_low = low;
    trace->winsor_high = high;
    trace->winsorized_mean = winsorized_mean;
  }
  return out;
}

}  // namespace dpci
