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

#include "dpci/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "dpci/status_macros.h"

namespace dpci {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Utility of zero-based bin i for 1-based target rank m.
inline int64_t BinUtility(int64_t i, int64_t m) {
  return i < m ? i + 1 - m : m - i;
}

absl::Status ValidateEpsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError(
        "epsilon must be finite and non-negative");
  }
  return absl::OkStatus();
}

absl::Status ValidateRank(QuantileRank rank, std::size_t n) {
  if (n == 0) return absl::InvalidArgumentError("database must not be empty");
  if (rank.value < 1 || rank.value > static_cast<int64_t>(n)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "quantile rank ", rank.value, " outside [1, ", n, "]"));
  }
  return absl::OkStatus();
}

absl::Status ValidateSortedInput(std::span<const double> sorted,
                                 QuantileRank rank, double epsilon,
                                 const DataBounds& bounds) {
  DPCI_RETURN_IF_ERROR(ValidateBounds(bounds));
  DPCI_RETURN_IF_ERROR(ValidateEpsilon(epsilon));
  DPCI_RETURN_IF_ERROR(ValidateRank(rank, sorted.size()));
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    return absl::InvalidArgumentError("input must be sorted ascending");
  }
  if (!(sorted.front() >= bounds.xmin) || !(sorted.back() <= bounds.xmax)) {
    return absl::InvalidArgumentError("values must be clamped to the bounds");
  }
  return absl::OkStatus();
}

double LogSumExp(std::span<const double> logs) {
  double max_log = kNegInf;
  for (double v : logs) max_log = std::max(max_log, v);
  if (max_log == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : logs) sum += std::exp(v - max_log);
  return max_log + std::log(sum);
}

// Selection on sorted, validated input. Weights are |B_i| exp(h (u_i - u*)),
// where u* is the best utility among bins of positive width, so every factor
// is at most 1 and the best bin contributes a positive weight.
std::size_t SelectBinUnchecked(std::span<const double> sorted, int64_t m,
                               double epsilon, const DataBounds& bounds,
                               RandomSource& rng) {
  const auto n = static_cast<int64_t>(sorted.size());
  const double half_eps = epsilon / 2;
  auto edge = [&](int64_t i) {
    if (i == 0) return bounds.xmin;
    if (i == n + 1) return bounds.xmax;
    return sorted[i - 1];
  };

  int64_t best_utility = std::numeric_limits<int64_t>::min();
  for (int64_t i = 0; i <= n; ++i) {
    if (edge(i + 1) > edge(i)) {
      best_utility = std::max(best_utility, BinUtility(i, m));
    }
  }

  thread_local std::vector<double> cumulative;
  cumulative.resize(static_cast<std::size_t>(n + 1));
  double total = 0.0;
  std::size_t last_positive = 0;
  for (int64_t i = 0; i <= n; ++i) {
    const double width = edge(i + 1) - edge(i);
    if (width > 0) {
      total += width * std::exp(half_eps * static_cast<double>(
                                               BinUtility(i, m) - best_utility));
      last_positive = static_cast<std::size_t>(i);
    }
    cumulative[i] = total;
  }

  const double target = rng.Uniform() * total;
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) return last_positive;
  return static_cast<std::size_t>(it - cumulative.begin());
}

double DrawInBin(std::span<const double> sorted, std::size_t bin,
                 const DataBounds& bounds, RandomSource& rng) {
  const std::size_t n = sorted.size();
  const double lo = bin == 0 ? bounds.xmin : sorted[bin - 1];
  const double hi = bin == n ? bounds.xmax : sorted[bin];
  double y = lo + rng.Uniform() * (hi - lo);
  if (y >= hi) y = std::nextafter(hi, lo);
  return std::max(y, lo);
}

}  // namespace

void PrivacyLedger::Record(absl::string_view label, double epsilon) {
  charges_.push_back(Charge{std::string(label), epsilon});
}

double PrivacyLedger::Total() const {
  double total = 0.0;
  for (const Charge& c : charges_) total += c.epsilon;
  return total;
}

double LaplaceFromUniform(double u, double scale) {
  if (u == 0.5 || scale == 0) return 0.0;
  // 1 - 2|u - 1/2| is 2u below the median and 2(1 - u) above it; writing it
  // that way avoids cancellation in the lower tail.
  return u < 0.5 ? scale * std::log(2.0 * u)
                 : -scale * std::log(2.0 * (1.0 - u));
}

absl::StatusOr<double> LaplaceDraw(double scale, RandomSource& rng) {
  if (!std::isfinite(scale) || scale < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be finite and >= 0, got ", scale));
  }
  if (scale == 0) return 0.0;
  return LaplaceFromUniform(rng.Uniform(), scale);
}

absl::StatusOr<double> LaplaceMechanism(double value, double sensitivity,
                                        double epsilon, RandomSource& rng,
                                        PrivacyLedger* ledger,
                                        absl::string_view label) {
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError(
        "Laplace mechanism needs a finite, positive epsilon");
  }
  DPCI_ASSIGN_OR_RETURN(const double noise,
                        LaplaceDraw(sensitivity / epsilon, rng));
  if (ledger != nullptr) ledger->Record(label, epsilon);
  return value + noise;
}

QuantileRank RankForFraction(double b, int64_t n) {
  return QuantileRank{
      static_cast<int64_t>(std::floor(b * static_cast<double>(n - 1) + 1.0))};
}

QuantileRank MedianRank(int64_t n) { return QuantileRank{(n + 1) / 2}; }

std::vector<double> BinLayout::LogWeights(double epsilon) const {
  std::vector<double> out(bin_count());
  for (std::size_t i = 0; i < bin_count(); ++i) {
    const double w = width(i);
    out[i] = w > 0 ? std::log(w) + epsilon / 2 *
                                       static_cast<double>(utilities[i])
                   : kNegInf;
  }
  return out;
}

std::vector<double> BinLayout::Probabilities(double epsilon) const {
  std::vector<double> logs = LogWeights(epsilon);
  const double log_total = LogSumExp(logs);
  for (double& v : logs) v = std::exp(v - log_total);
  return logs;
}

absl::StatusOr<BinLayout> BuildBins(std::span<const double> values,
                                    const DataBounds& bounds,
                                    QuantileRank rank) {
  DPCI_RETURN_IF_ERROR(ValidateBounds(bounds));
  DPCI_RETURN_IF_ERROR(ValidateRank(rank, values.size()));
  BinLayout layout;
  layout.edges.reserve(values.size() + 2);
  layout.edges.push_back(bounds.xmin);
  layout.edges.insert(layout.edges.end(), values.begin(), values.end());
  std::stable_sort(layout.edges.begin() + 1, layout.edges.end());
  layout.edges.push_back(bounds.xmax);
  if (!(layout.edges[1] >= bounds.xmin) ||
      !(layout.edges[values.size()] <= bounds.xmax)) {
    return absl::InvalidArgumentError("values must be clamped to the bounds");
  }
  const auto n = static_cast<int64_t>(values.size());
  layout.utilities.resize(values.size() + 1);
  for (int64_t i = 0; i <= n; ++i) {
    layout.utilities[i] = BinUtility(i, rank.value);
  }
  return layout;
}

absl::StatusOr<double> Expq(std::span<const double> values, QuantileRank rank,
                            double epsilon, const DataBounds& bounds,
                            RandomSource& rng, PrivacyLedger* ledger) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) {
    return absl::InvalidArgumentError("database must not be empty");
  }
  return ExpqSorted(sorted, rank, epsilon, bounds, rng, ledger);
}

absl::StatusOr<double> ExpqSorted(std::span<const double> sorted,
                                  QuantileRank rank, double epsilon,
                                  const DataBounds& bounds, RandomSource& rng,
                                  PrivacyLedger* ledger) {
  DPCI_RETURN_IF_ERROR(ValidateSortedInput(sorted, rank, epsilon, bounds));
  const std::size_t bin =
      SelectBinUnchecked(sorted, rank.value, epsilon, bounds, rng);
  if (ledger != nullptr) ledger->Record("expq", epsilon);
  return DrawInBin(sorted, bin, bounds, rng);
}

absl::StatusOr<std::size_t> ExpqSelectBin(std::span<const double> sorted,
                                          QuantileRank rank, double epsilon,
                                          const DataBounds& bounds,
                                          RandomSource& rng) {
  DPCI_RETURN_IF_ERROR(ValidateSortedInput(sorted, rank, epsilon, bounds));
  return SelectBinUnchecked(sorted, rank.value, epsilon, bounds, rng);
}

absl::StatusOr<double> ExpqExactDensity(std::span<const double> values,
                                        QuantileRank rank, double epsilon,
                                        const DataBounds& bounds, double y) {
  DPCI_RETURN_IF_ERROR(ValidateEpsilon(epsilon));
  DPCI_ASSIGN_OR_RETURN(const BinLayout layout,
                        BuildBins(values, bounds, rank));
  if (!(y >= bounds.xmin && y < bounds.xmax)) {
    return absl::InvalidArgumentError(
        absl::StrCat("evaluation point ", y, " outside [xmin, xmax)"));
  }
  const std::vector<double> logs = layout.LogWeights(epsilon);
  const double log_total = LogSumExp(logs);
  const auto it = std::upper_bound(layout.edges.begin(), layout.edges.end(), y);
  const auto bin = static_cast<std::size_t>(it - layout.edges.begin()) - 1;
  return std::exp(epsilon / 2 * static_cast<double>(layout.utilities[bin]) -
                  log_total);
}

absl::StatusOr<double> ExpqExpectedValue(std::span<const double> values,
                                         QuantileRank rank, double epsilon,
                                         const DataBounds& bounds) {
  DPCI_RETURN_IF_ERROR(ValidateEpsilon(epsilon));
  DPCI_ASSIGN_OR_RETURN(const BinLayout layout,
                        BuildBins(values, bounds, rank));
  const std::vector<double> probs = layout.Probabilities(epsilon);
  double expected = 0.0;
  for (std::size_t i = 0; i < layout.bin_count(); ++i) {
    if (probs[i] == 0) continue;
    expected += probs[i] * (layout.edges[i] + layout.edges[i + 1]) / 2;
  }
  return expected;
}

}  // namespace dpci
