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

// Straightforward serial implementations of the hot paths. They exist so
// tests can check the optimised versions against them and the benchmark can
// measure the difference; production code does not call them.

#ifndef DPCI_REFERENCE_H_
#define DPCI_REFERENCE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpci/core.h"
#include "dpci/mechanisms.h"
#include "dpci/random.h"
#include "dpci/simulate.h"

namespace dpci::reference {

// Bin selection done directly in log space: builds the full BinLayout,
// normalises with log-sum-exp and walks the probabilities linearly. Consumes
// one uniform per call, like ExpqSelectBin, and for the same draw picks the
// same bin up to floating-point ties at bin boundaries.
absl::StatusOr<std::size_t> ExpqSelectBin(std::span<const double> values,
                                          QuantileRank rank, double epsilon,
                                          const DataBounds& bounds,
                                          RandomSource& rng);

// One thread, trials in order.
absl::StatusOr<std::vector<GroupSummary>> RunGroupsSerial(
    std::span<const TrialGroup> groups, const TrialSettings& settings);

absl::StatusOr<std::vector<CellRecord>> RunExperimentSerial(
    const ExperimentGrid& grid);

}  // namespace dpci::reference

#endif  // DPCI_REFERENCE_H_
