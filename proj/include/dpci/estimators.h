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

// Private (center, spread) estimators. Every estimator expects data already
// clamped to `bounds` and rejects anything outside it.
//
//   NoisyVar  Laplace noise on the mean and on the sample variance.
//   NoisyMad  Laplace noise on the mean and on the mean absolute deviation,
//             rescaled by sqrt(pi / 2).
//   CenQ      private median plus one upper quantile at fraction b.
//   SymQ      private quantiles at b and 1 - b; center is their midpoint.
//   ModDev    private median, then private median of |x - median|.

#ifndef DPCI_ESTIMATORS_H_
#define DPCI_ESTIMATORS_H_

#include <cstdint>
#include <span>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpci/core.h"
#include "dpci/mechanisms.h"
#include "dpci/random.h"

namespace dpci {

struct EstimatorParams {
  // Fraction of epsilon spent on the center.
  double rho = 0.5;
  // Quantile fraction used for the spread (CenQ, SymQ only).
  double b = 0.35;

  // The tuned defaults: NoisyVar rho 0.8, NoisyMad rho 0.85, CenQ rho 0.5
  // with b 0.65, SymQ b 0.35, Mod rho 0.5.
  static EstimatorParams Defaults(Method method);
};

absl::StatusOr<CenterSpread> NoisyVar(std::span<const double> values,
                                      const PrivacyBudget& budget,
                                      const DataBounds& bounds,
                                      RandomSource& rng,
                                      PrivacyLedger* ledger = nullptr);

absl::StatusOr<CenterSpread> NoisyMad(std::span<const double> values,
                                      const PrivacyBudget& budget,
                                      const DataBounds& bounds,
                                      RandomSource& rng,
                                      PrivacyLedger* ledger = nullptr);

// Requires 0.5 < b < 1.
absl::StatusOr<CenterSpread> CenQ(std::span<const double> values,
                                  const PrivacyBudget& budget, double b,
                                  const DataBounds& bounds, RandomSource& rng,
                                  PrivacyLedger* ledger = nullptr);

// Requires 0 < b < 0.5. The budget is split evenly; there is no rho.
absl::StatusOr<CenterSpread> SymQ(std::span<const double> values,
                                  double epsilon, double b,
                                  const DataBounds& bounds, RandomSource& rng,
                                  PrivacyLedger* ledger = nullptr);

absl::StatusOr<CenterSpread> ModDev(std::span<const double> values,
                                    const PrivacyBudget& budget,
                                    const DataBounds& bounds,
                                    RandomSource& rng,
                                    PrivacyLedger* ledger = nullptr);

// Method-agnostic entry point for the five private estimators above.
struct EstimatorConfig {
  Method method = Method::kSymQ;
  double epsilon = 1.0;
  DataBounds bounds;
  EstimatorParams params;
};

// True for the five methods that can be run through Estimate().
bool IsPrivateEstimator(Method method);

// Checks epsilon, bounds and the (rho, b) combination for `config.method`
// without touching data.
absl::Status ValidateEstimatorConfig(const EstimatorConfig& config);

// Smallest database each method accepts.
int64_t MinimumSize(Method method);

absl::StatusOr<CenterSpread> Estimate(const EstimatorConfig& config,
                                      std::span<const double> values,
                                      RandomSource& rng,
                                      PrivacyLedger* ledger = nullptr);

}  // namespace dpci

#endif  // DPCI_ESTIMATORS_H_
