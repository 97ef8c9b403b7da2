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

#include "dpci/simulate.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dpci/status_macros.h"

namespace dpci {
namespace {

absl::Status ValidateSettings(const TrialSettings& settings) {
  if (settings.trials < 1) {
    return absl::InvalidArgumentError("trials must be at least 1");
  }
  if (settings.nsim < 1) {
    return absl::InvalidArgumentError("nsim must be at least 1");
  }
  if (!std::isfinite(settings.mu)) {
    return absl::InvalidArgumentError("mu must be finite");
  }
  if (!std::isfinite(settings.sigma) || settings.sigma <= 0) {
    return absl::InvalidArgumentError("sigma must be finite and positive");
  }
  return absl::OkStatus();
}

absl::Status ValidateAlpha(double alpha) {
  if (!(alpha > 0 && alpha < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1), got ", alpha));
  }
  return absl::OkStatus();
}

absl::Status RequireSize(Method method, int64_t n) {
  if (n < MinimumSize(method)) {
    return absl::FailedPreconditionError(
        absl::StrCat(MethodName(method), " needs n >= ", MinimumSize(method),
                     ", got ", n));
  }
  return absl::OkStatus();
}

int ThreadCount(const RunOptions& options) {
  return options.jobs > 0 ? options.jobs : omp_get_max_threads();
}

absl::StatusOr<CenterSpread> RunCenterSpread(const MethodSpec& spec,
                                             std::span<const double> values,
                                             RandomSource& rng,
                                             PrivacyLedger* ledger) {
  if (spec.method == Method::kOra) {
    return OraEstimate(values, spec.epsilon, spec.bounds, spec.ora, rng,
                       ledger);
  }
  return Estimate(EstimatorConfig{spec.method, spec.epsilon, spec.bounds,
                                  spec.params},
                  values, rng, ledger);
}

double StandardError(double sum, double sum_sq, int trials) {
  if (trials < 2) return 0.0;
  const double t = static_cast<double>(trials);
  const double mean = sum / t;
  const double var = std::max(0.0, (sum_sq - t * mean * mean) / (t - 1));
  return std::sqrt(var / t);
}

}  // namespace

absl::StatusOr<ConfidenceInterval> SimulatedReference::Interval(
    double alpha) const {
  DPCI_RETURN_IF_ERROR(ValidateAlpha(alpha));
  DPCI_ASSIGN_OR_RETURN(const double lo,
                        EmpiricalQuantileSorted(centers, alpha / 2));
  DPCI_ASSIGN_OR_RETURN(const double hi,
                        EmpiricalQuantileSorted(centers, 1 - alpha / 2));
  ConfidenceInterval ci;
  ci.alpha = alpha;
  ci.nsim = static_cast<int>(centers.size());
  ci.center = estimate.center;
  ci.spread = estimate.spread;
  ci.spread_floored = estimate.spread_floored;
  ci.moe = (hi - lo) / 2;
  ci.lower = estimate.center - ci.moe;
  ci.upper = estimate.center + ci.moe;
  return ci;
}

absl::StatusOr<SimulatedReference> SimulateReference(
    CenterSpreadFn estimator, std::span<const double> values,
    const DataBounds& bounds, int nsim, bool clamp_synthetic,
    RandomSource& rng, PrivacyLedger* ledger) {
  if (nsim < 1) return absl::InvalidArgumentError("nsim must be at least 1");
  DPCI_RETURN_IF_ERROR(ValidateBounds(bounds));
  if (values.empty()) {
    return absl::InvalidArgumentError("database must not be empty");
  }
  SimulatedReference ref;
  DPCI_ASSIGN_OR_RETURN(ref.estimate, estimator(values, rng, ledger));

  std::vector<double> synthetic(values.size());
  ref.centers.reserve(static_cast<std::size_t>(nsim));
  for (int k = 0; k < nsim; ++k) {
    rng.FillNormal(synthetic, ref.estimate.center, ref.estimate.spread);
    if (clamp_synthetic) ClampInPlace(synthetic, bounds);
    DPCI_ASSIGN_OR_RETURN(const CenterSpread rerun,
                          estimator(synthetic, rng, nullptr));
    ref.centers.push_back(rerun.center);
  }
  std::sort(ref.centers.begin(), ref.centers.end());
  return ref;
}

absl::StatusOr<ConfidenceInterval> SimCi(CenterSpreadFn estimator,
                                         std::span<const double> values,
                                         const DataBounds& bounds,
                                         const SimConfig& config,
                                         RandomSource& rng,
                                         PrivacyLedger* ledger) {
  DPCI_RETURN_IF_ERROR(ValidateAlpha(config.alpha));
  DPCI_ASSIGN_OR_RETURN(
      const SimulatedReference ref,
      SimulateReference(estimator, values, bounds, config.nsim,
                        config.clamp_synthetic, rng, ledger));
  DPCI_ASSIGN_OR_RETURN(ConfidenceInterval ci, ref.Interval(config.alpha));
  ci.seed = config.seed;
  return ci;
}

absl::Status ValidateMethodSpec(const MethodSpec& spec) {
  DPCI_RETURN_IF_ERROR(ValidateBounds(spec.bounds));
  switch (spec.method) {
    case Method::kPublic:
      return absl::OkStatus();
    case Method::kOra:
    case Method::kVadhan:
      if (!std::isfinite(spec.epsilon) || spec.epsilon <= 0) {
        return absl::InvalidArgumentError(
            "epsilon must be finite and positive");
      }
      if (spec.method == Method::kOra &&
          (spec.ora.sd_max < 0 || !std::isfinite(spec.ora.sd_max))) {
        return absl::InvalidArgumentError("sd_max must be positive");
      }
      return absl::OkStatus();
    default:
      return ValidateEstimatorConfig(EstimatorConfig{
          spec.method, spec.epsilon, spec.bounds, spec.params});
  }
}

absl::StatusOr<std::vector<ConfidenceInterval>> BuildIntervals(
    const MethodSpec& spec, std::span<const double> values,
    std::span<const double> alphas, int nsim, bool clamp_synthetic,
    std::uint64_t noise_seed, PrivacyLedger* ledger) {
  for (double alpha : alphas) DPCI_RETURN_IF_ERROR(ValidateAlpha(alpha));
  std::vector<ConfidenceInterval> out;
  out.reserve(alphas.size());

  if (spec.method == Method::kPublic) {
    for (double alpha : alphas) {
      DPCI_ASSIGN_OR_RETURN(ConfidenceInterval ci, PublicCi(values, alpha));
      ci.seed = noise_seed;
      out.push_back(ci);
    }
    return out;
  }

  if (spec.method == Method::kVadhan) {
    for (double alpha : alphas) {
      SeededRandom rng(DeriveSeed(noise_seed, {DoubleBits(alpha)}));
      const VadhanParams params =
          VadhanParams::EqualSplit(alpha, spec.epsilon, spec.bounds);
      DPCI_ASSIGN_OR_RETURN(ConfidenceInterval ci,
                            VadhanCi(values, params, rng, ledger));
      ci.seed = noise_seed;
      out.push_back(ci);
    }
    return out;
  }

  SeededRandom rng(noise_seed);
  auto estimator = [&spec](std::span<const double> data, RandomSource& r,
                           PrivacyLedger* l) {
    return RunCenterSpread(spec, data, r, l);
  };
  DPCI_ASSIGN_OR_RETURN(const SimulatedReference ref,
                        SimulateReference(estimator, values, spec.bounds,
                                          nsim, clamp_synthetic, rng, ledger));
  for (double alpha : alphas) {
    DPCI_ASSIGN_OR_RETURN(ConfidenceInterval ci, ref.Interval(alpha));
    ci.method = spec.method;
    ci.seed = noise_seed;
    out.push_back(ci);
  }
  return out;
}

std::uint64_t TrialDataSeed(const TrialSettings& settings, int64_t n,
                            int trial) {
  return DeriveSeed(settings.seed,
                    {static_cast<std::uint64_t>(n), DoubleBits(settings.mu),
                     DoubleBits(settings.sigma),
                     static_cast<std::uint64_t>(trial)});
}

std::uint64_t TrialNoiseSeed(const TrialSettings& settings, int64_t n,
                             int trial) {
  return DeriveSeed(TrialDataSeed(settings, n, trial), {1});
}

absl::StatusOr<std::vector<ConfidenceInterval>> RunTrial(
    const TrialGroup& group, const TrialSettings& settings, int trial) {
  SeededRandom data_rng(TrialDataSeed(settings, group.n, trial));
  std::vector<double> data(static_cast<std::size_t>(group.n));
  data_rng.FillNormal(data, settings.mu, settings.sigma);
  ClampInPlace(data, group.spec.bounds);
  return BuildIntervals(group.spec, data, group.alphas, settings.nsim,
                        settings.clamp_synthetic,
                        TrialNoiseSeed(settings, group.n, trial));
}

GroupSummary FoldTrials(
    std::span<const std::vector<ConfidenceInterval>> trial_intervals,
    std::size_t alpha_count, double mu) {
  GroupSummary summary;
  summary.trials = static_cast<int>(trial_intervals.size());
  summary.covered.assign(alpha_count, 0);
  summary.moe_sum.assign(alpha_count, 0.0);
  summary.moe_sum_sq.assign(alpha_count, 0.0);
  for (const auto& intervals : trial_intervals) {
    for (std::size_t a = 0; a < alpha_count; ++a) {
      const ConfidenceInterval& ci = intervals[a];
      summary.covered[a] += ci.Covers(mu) ? 1 : 0;
      summary.moe_sum[a] += ci.moe;
      summary.moe_sum_sq[a] += ci.moe * ci.moe;
    }
  }
  return summary;
}

absl::StatusOr<std::vector<GroupSummary>> RunGroups(
    std::span<const TrialGroup> groups, const TrialSettings& settings,
    const RunOptions& options) {
  DPCI_RETURN_IF_ERROR(ValidateSettings(settings));
  const auto trials = static_cast<std::size_t>(settings.trials);
  const std::size_t tasks = groups.size() * trials;
  std::vector<std::vector<ConfidenceInterval>> results(tasks);
  std::vector<absl::Status> errors(tasks);

#pragma omp parallel for schedule(dynamic) num_threads(ThreadCount(options))
  for (std::size_t task = 0; task < tasks; ++task) {
    const TrialGroup& group = groups[task / trials];
    auto intervals =
        RunTrial(group, settings, static_cast<int>(task % trials));
    if (intervals.ok()) {
      results[task] = *std::move(intervals);
    } else {
      errors[task] = intervals.status();
    }
  }

  for (const absl::Status& status : errors) DPCI_RETURN_IF_ERROR(status);
  std::vector<GroupSummary> summaries;
  summaries.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    summaries.push_back(FoldTrials(
        std::span<const std::vector<ConfidenceInterval>>(results).subspan(
            g * trials, trials),
        groups[g].alphas.size(), settings.mu));
  }
  return summaries;
}

absl::Status ValidateGrid(const ExperimentGrid& grid) {
  if (grid.methods.empty()) return absl::InvalidArgumentError("no methods");
  if (grid.n_values.empty()) return absl::InvalidArgumentError("empty n grid");
  if (grid.epsilons.empty()) {
    return absl::InvalidArgumentError("empty epsilon grid");
  }
  if (grid.bounds.empty()) {
    return absl::InvalidArgumentError("empty bounds grid");
  }
  if (grid.alphas.empty()) {
    return absl::InvalidArgumentError("empty alpha grid");
  }
  DPCI_RETURN_IF_ERROR(ValidateSettings(grid.settings));
  for (double alpha : grid.alphas) DPCI_RETURN_IF_ERROR(ValidateAlpha(alpha));
  for (const TrialGroup& group : ExpandGrid(grid)) {
    DPCI_RETURN_IF_ERROR(ValidateMethodSpec(group.spec));
    DPCI_RETURN_IF_ERROR(RequireSize(group.spec.method, group.n));
  }
  return absl::OkStatus();
}

std::vector<TrialGroup> ExpandGrid(const ExperimentGrid& grid) {
  std::vector<TrialGroup> groups;
  for (Method method : grid.methods) {
    const auto it = grid.params.find(method);
    const EstimatorParams params = it != grid.params.end()
                                       ? it->second
                                       : EstimatorParams::Defaults(method);
    for (int64_t n : grid.n_values) {
      for (double epsilon : grid.epsilons) {
        for (const DataBounds& bounds : grid.bounds) {
          TrialGroup group;
          group.spec = MethodSpec{method, epsilon, bounds, params, grid.ora};
          group.n = n;
          group.alphas = grid.alphas;
          groups.push_back(std::move(group));
        }
      }
    }
  }
  return groups;
}

std::vector<CellRecord> Summarize(std::span<const TrialGroup> groups,
                                  std::span<const GroupSummary> summaries) {
  std::vector<CellRecord> records;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const TrialGroup& group = groups[g];
    const GroupSummary& summary = summaries[g];
    const double t = static_cast<double>(summary.trials);
    for (std::size_t a = 0; a < group.alphas.size(); ++a) {
      CellRecord rec;
      rec.cell = CellKey{group.spec.method, group.n, group.spec.epsilon,
                         group.spec.bounds, group.alphas[a]};
      rec.trials = summary.trials;
      rec.coverage = summary.covered[a] / t;
      rec.coverage_stderr =
          std::sqrt(rec.coverage * (1 - rec.coverage) / t);
      rec.mean_moe = summary.moe_sum[a] / t;
      rec.moe_stderr = StandardError(summary.moe_sum[a],
                                     summary.moe_sum_sq[a], summary.trials);
      records.push_back(rec);
    }
  }
  return records;
}

absl::StatusOr<std::vector<CellRecord>> RunExperiment(
    const ExperimentGrid& grid, const RunOptions& options) {
  DPCI_RETURN_IF_ERROR(ValidateGrid(grid));
  const std::vector<TrialGroup> groups = ExpandGrid(grid);
  DPCI_ASSIGN_OR_RETURN(const std::vector<GroupSummary> summaries,
                        RunGroups(groups, grid.settings, options));
  return Summarize(groups, summaries);
}

absl::Status ValidateSweep(const SweepSpec& spec) {
  if (spec.values.empty()) {
    return absl::InvalidArgumentError("empty parameter grid");
  }
  const bool uses_rho = spec.method == Method::kNoisyVar ||
                        spec.method == Method::kNoisyMad ||
                        spec.method == Method::kCenQ ||
                        spec.method == Method::kMod;
  const bool uses_b =
      spec.method == Method::kCenQ || spec.method == Method::kSymQ;
  if (!((spec.param == "rho" && uses_rho) || (spec.param == "b" && uses_b))) {
    return absl::InvalidArgumentError(
        absl::StrCat("parameter '", spec.param, "' does not apply to ",
                     MethodName(spec.method)));
  }
  DPCI_RETURN_IF_ERROR(ValidateSettings(spec.settings));
  DPCI_RETURN_IF_ERROR(ValidateAlpha(spec.alpha));
  for (double value : spec.values) {
    EstimatorConfig config{spec.method, spec.epsilon, spec.bounds, spec.base};
    (spec.param == "rho" ? config.params.rho : config.params.b) = value;
    DPCI_RETURN_IF_ERROR(ValidateEstimatorConfig(config));
  }
  return RequireSize(spec.method, spec.n);
}

absl::StatusOr<std::vector<SweepRecord>> SweepParam(
    const SweepSpec& spec, const RunOptions& options) {
  DPCI_RETURN_IF_ERROR(ValidateSweep(spec));
  std::vector<TrialGroup> groups;
  for (double value : spec.values) {
    TrialGroup group;
    group.spec = MethodSpec{spec.method, spec.epsilon, spec.bounds, spec.base,
                            OraParams{}};
    (spec.param == "rho" ? group.spec.params.rho : group.spec.params.b) =
        value;
    group.n = spec.n;
    group.alphas = {spec.alpha};
    groups.push_back(std::move(group));
  }
  DPCI_ASSIGN_OR_RETURN(const std::vector<GroupSummary> summaries,
                        RunGroups(groups, spec.settings, options));
  std::vector<SweepRecord> records;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const GroupSummary& s = summaries[i];
    SweepRecord rec;
    rec.method = spec.method;
    rec.param = spec.param;
    rec.value = spec.values[i];
    rec.n = spec.n;
    rec.epsilon = spec.epsilon;
    rec.trials = s.trials;
    rec.mean_moe = s.moe_sum[0] / static_cast<double>(s.trials);
    rec.moe_stderr = StandardError(s.moe_sum[0], s.moe_sum_sq[0], s.trials);
    records.push_back(rec);
  }
  return records;
}

absl::Status ValidateBias(const BiasSpec& spec) {
  if (!(spec.b > 0 && spec.b < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("b must lie in (0, 1), got ", spec.b));
  }
  if (spec.n < 1) return absl::InvalidArgumentError("n must be at least 1");
  if (spec.trials < 1) {
    return absl::InvalidArgumentError("trials must be at least 1");
  }
  if (!std::isfinite(spec.epsilon) || spec.epsilon < 0) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  if (!std::isfinite(spec.mu) || !std::isfinite(spec.sigma) ||
      spec.sigma <= 0) {
    return absl::InvalidArgumentError("need finite mu and positive sigma");
  }
  return ValidateBounds(spec.bounds);
}

absl::StatusOr<BiasRecord> BiasCurve(const BiasSpec& spec,
                                     const RunOptions& options) {
  DPCI_RETURN_IF_ERROR(ValidateBias(spec));
  DPCI_ASSIGN_OR_RETURN(const double z, NormalQuantile(spec.b));
  const double target = spec.mu + spec.sigma * z;
  const QuantileRank rank = RankForFraction(spec.b, spec.n);
  const TrialSettings settings{spec.mu, spec.sigma, spec.trials, 1, spec.seed,
                               true};

  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<double> diffs(trials);
  std::vector<absl::Status> errors(trials);
#pragma omp parallel for schedule(dynamic) num_threads(ThreadCount(options))
  for (std::size_t t = 0; t < trials; ++t) {
    SeededRandom rng(TrialDataSeed(settings, spec.n, static_cast<int>(t)));
    std::vector<double> data(static_cast<std::size_t>(spec.n));
    rng.FillNormal(data, spec.mu, spec.sigma);
    ClampInPlace(data, spec.bounds);
    auto expected = ExpqExpectedValue(data, rank, spec.epsilon, spec.bounds);
    if (expected.ok()) {
      diffs[t] = *expected - target;
    } else {
      errors[t] = expected.status();
    }
  }
  for (const absl::Status& status : errors) DPCI_RETURN_IF_ERROR(status);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (double d : diffs) {
    sum += d;
    sum_sq += d * d;
  }
  BiasRecord rec;
  rec.n = spec.n;
  rec.epsilon = spec.epsilon;
  rec.b = spec.b;
  rec.trials = spec.trials;
  rec.bias = sum / static_cast<double>(spec.trials);
  rec.standard_error = StandardError(sum, sum_sq, spec.trials);
  return rec;
}

}  // namespace dpci
