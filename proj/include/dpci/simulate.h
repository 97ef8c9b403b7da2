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

// Simulation-based intervals and the Monte Carlo experiment harness.
//
// SimCi runs a private estimator once on the real data to get (x~, s~), then
// reruns it `nsim` times on synthetic N(x~, s~^2) databases of the same size.
// Half the central (1 - alpha) range of the simulated centers is the margin
// of error around x~. The reruns only touch synthetic data, so only the
// first call is charged to the ledger.
//
// Seeding. Trial t of an experiment derives two streams from the master seed:
//   data  = DeriveSeed(seed, {n, bits(mu), bits(sigma), t})
//   noise = DeriveSeed(data, {1})
// Method, epsilon, bounds, alpha and swept parameters are deliberately left
// out, so every cell sharing n sees the same databases and the same noise
// stream (common random numbers). That keeps comparisons between methods and
// parameter values sharp. Results depend only on the seed, never on thread
// count or scheduling.

#ifndef DPCI_SIMULATE_H_
#define DPCI_SIMULATE_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/functional/function_ref.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpci/baselines.h"
#include "dpci/core.h"
#include "dpci/estimators.h"
#include "dpci/mechanisms.h"
#include "dpci/random.h"

namespace dpci {

using CenterSpreadFn = absl::FunctionRef<absl::StatusOr<CenterSpread>(
    std::span<const double>, RandomSource&, PrivacyLedger*)>;

struct SimConfig {
  int nsim = 1000;
  double alpha = 0.05;
  // Recorded in the interval; the caller seeds `rng`.
  std::uint64_t seed = 0;
  // Clamp synthetic databases to the bounds before re-estimation. The
  // quantile estimators reject unclamped input, so turning this off only
  // makes sense for the Laplace-based ones.
  bool clamp_synthetic = true;
};

// The private estimate plus the sorted simulated centers it induces. One
// reference serves every alpha.
struct SimulatedReference {
  CenterSpread estimate;
  std::vector<double> centers;

  absl::StatusOr<ConfidenceInterval> Interval(double alpha) const;
};

absl::StatusOr<SimulatedReference> SimulateReference(
    CenterSpreadFn estimator, std::span<const double> values,
    const DataBounds& bounds, int nsim, bool clamp_synthetic,
    RandomSource& rng, PrivacyLedger* ledger = nullptr);

absl::StatusOr<ConfidenceInterval> SimCi(CenterSpreadFn estimator,
                                         std::span<const double> values,
                                         const DataBounds& bounds,
                                         const SimConfig& config,
                                         RandomSource& rng,
                                         PrivacyLedger* ledger = nullptr);

// Everything needed to build an interval with any supported method.
struct MethodSpec {
  Method method = Method::kSymQ;
  double epsilon = 1.0;
  DataBounds bounds;
  EstimatorParams params;
  OraParams ora;
};

absl::Status ValidateMethodSpec(const MethodSpec& spec);

// One interval per alpha for data already clamped to `spec.bounds`. SIM-based
// methods share one simulated reference across the alphas; public uses the
// t interval; vadhan uses an equal four-way alpha split and draws fresh noise
// for each alpha from a stream derived from `noise_seed`.
absl::StatusOr<std::vector<ConfidenceInterval>> BuildIntervals(
    const MethodSpec& spec, std::span<const double> values,
    std::span<const double> alphas, int nsim, bool clamp_synthetic,
    std::uint64_t noise_seed, PrivacyLedger* ledger = nullptr);

// Settings shared by every cell of a run.
struct TrialSettings {
  double mu = 0.0;
  double sigma = 1.0;
  int trials = 100;
  int nsim = 1000;
  std::uint64_t seed = 0;
  bool clamp_synthetic = true;
};

// A block of cells that differ only in alpha and therefore share trials.
struct TrialGroup {
  MethodSpec spec;
  int64_t n = 100;
  std::vector<double> alphas;
};

// Per-alpha aggregates over all trials of one group.
struct GroupSummary {
  int trials = 0;
  std::vector<int> covered;
  std::vector<double> moe_sum;
  std::vector<double> moe_sum_sq;
};

std::uint64_t TrialDataSeed(const TrialSettings& settings, int64_t n,
                            int trial);
std::uint64_t TrialNoiseSeed(const TrialSettings& settings, int64_t n,
                             int trial);

// Draws trial `trial` of `group` (data, clamp, intervals) and returns the
// interval for each alpha. Shared by the parallel and serial runners.
absl::StatusOr<std::vector<ConfidenceInterval>> RunTrial(
    const TrialGroup& group, const TrialSettings& settings, int trial);

// Folds per-trial intervals (outer index trial, inner index alpha) in trial
// order, scoring coverage of the true mean `mu`.
GroupSummary FoldTrials(
    std::span<const std::vector<ConfidenceInterval>> trial_intervals,
    std::size_t alpha_count, double mu);

struct RunOptions {
  // Worker threads; 0 lets OpenMP decide.
  int jobs = 0;
};

// Runs all groups x trials in parallel. Per-trial results are stored by index
// and folded in trial order, so the output is identical to the serial
// reference runner for any thread count.
absl::StatusOr<std::vector<GroupSummary>> RunGroups(
    std::span<const TrialGroup> groups, const TrialSettings& settings,
    const RunOptions& options = {});

struct ExperimentGrid {
  std::vector<Method> methods;
  std::vector<int64_t> n_values;
  std::vector<double> epsilons;
  std::vector<DataBounds> bounds;
  std::vector<double> alphas;
  TrialSettings settings;
  // Per-method overrides of EstimatorParams::Defaults.
  std::map<Method, EstimatorParams> params;
  OraParams ora;
};

absl::Status ValidateGrid(const ExperimentGrid& grid);

struct CellKey {
  Method method = Method::kSymQ;
  int64_t n = 0;
  double epsilon = 0.0;
  DataBounds bounds;
  double alpha = 0.0;
};

struct CellRecord {
  CellKey cell;
  int trials = 0;
  double coverage = 0.0;
  // sqrt(p (1 - p) / trials).
  double coverage_stderr = 0.0;
  double mean_moe = 0.0;
  // Sample standard deviation of the MoE over sqrt(trials); 0 for 1 trial.
  double moe_stderr = 0.0;
};

// Groups in grid order: method, n, epsilon, bounds.
std::vector<TrialGroup> ExpandGrid(const ExperimentGrid& grid);

// Records ordered by method, n, epsilon, bounds, alpha as listed in the
// grid. Both coverage and MoE are filled in.
std::vector<CellRecord> Summarize(std::span<const TrialGroup> groups,
                                  std::span<const GroupSummary> summaries);

absl::StatusOr<std::vector<CellRecord>> RunExperiment(
    const ExperimentGrid& grid, const RunOptions& options = {});

struct SweepSpec {
  Method method = Method::kSymQ;
  // "rho" or "b".
  std::string param = "b";
  std::vector<double> values;
  int64_t n = 1000;
  double epsilon = 0.1;
  DataBounds bounds{-6.0, 6.0};
  double alpha = 0.05;
  TrialSettings settings;
  // Starting point for the parameters that are not swept.
  EstimatorParams base;
};

struct SweepRecord {
  Method method = Method::kSymQ;
  std::string param;
  double value = 0.0;
  int64_t n = 0;
  double epsilon = 0.0;
  double mean_moe = 0.0;
  double moe_stderr = 0.0;
  int trials = 0;
};

absl::Status ValidateSweep(const SweepSpec& spec);

absl::StatusOr<std::vector<SweepRecord>> SweepParam(
    const SweepSpec& spec, const RunOptions& options = {});

struct BiasSpec {
  int64_t n = 50;
  double epsilon = 0.1;
  // Quantile fraction in (0, 1); the sampler targets rank floor(b (n-1) + 1).
  double b = 0.5;
  DataBounds bounds{-6.0, 6.0};
  double mu = 0.0;
  double sigma = 1.0;
  int trials = 1000;
  std::uint64_t seed = 0;
};

struct BiasRecord {
  int64_t n = 0;
  double epsilon = 0.0;
  double b = 0.0;
  double bias = 0.0;
  double standard_error = 0.0;
  int trials = 0;
};

absl::Status ValidateBias(const BiasSpec& spec);

// Mean over random N(mu, sigma^2) databases of the exact expected sampler
// output minus the population quantile mu + sigma qz(b).
absl::StatusOr<BiasRecord> BiasCurve(const BiasSpec& spec,
                                     const RunOptions& options = {});

}  // namespace dpci

#endif  // DPCI_SIMULATE_H_
