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

#include "dpci/reference.h"

#include <utility>

#include "dpci/status_macros.h"

namespace dpci::reference {

absl::StatusOr<std::size_t> ExpqSelectBin(std::span<const double> values,
                                          QuantileRank rank, double epsilon,
                                          const DataBounds& bounds,
                                          RandomSource& rng) {
  DPCI_ASSIGN_OR_RETURN(const BinLayout layout,
                        BuildBins(values, bounds, rank));
  const std::vector<double> probs = layout.Probabilities(epsilon);
  const double u = rng.Uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0) continue;
    last_positive = i;
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return last_positive;
}

absl::StatusOr<std::vector<GroupSummary>> RunGroupsSerial(
    std::span<const TrialGroup> groups, const TrialSettings& settings) {
  if (settings.trials < 1 || settings.nsim < 1) {
    return absl::InvalidArgumentError("trials and nsim must be at least 1");
  }
  std::vector<GroupSummary> summaries;
  for (const TrialGroup& group : groups) {
    std::vector<std::vector<ConfidenceInterval>> trials;
    for (int t = 0; t < settings.trials; ++t) {
      DPCI_ASSIGN_OR_RETURN(auto intervals, RunTrial(group, settings, t));
      trials.push_back(std::move(intervals));
    }
    summaries.push_back(
        FoldTrials(trials, group.alphas.size(), settings.mu));
  }
  return summaries;
}

absl::StatusOr<std::vector<CellRecord>> RunExperimentSerial(
    const ExperimentGrid& grid) {
  DPCI_RETURN_IF_ERROR(ValidateGrid(grid));
  const std::vector<TrialGroup> groups = ExpandGrid(grid);
  DPCI_ASSIGN_OR_RETURN(const std::vector<GroupSummary> summaries,
                        RunGroupsSerial(groups, grid.settings));
  return Summarize(groups, summaries);
}

}  // namespace dpci::reference
