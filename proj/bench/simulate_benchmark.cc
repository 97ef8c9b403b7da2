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

// Compares the production kernels with their serial references: the
// prefix-sum quantile sampler against the log-space linear scan, and the
// OpenMP trial runner against the single-threaded one.

#include <algorithm>
#include <vector>

#include "benchmark/benchmark.h"
#include "dpci/mechanisms.h"
#include "dpci/random.h"
#include "dpci/reference.h"
#include "dpci/simulate.h"

namespace dpci {
namespace {

std::vector<double> SortedNormalData(int64_t n) {
  SeededRandom rng(7);
  std::vector<double> data(static_cast<std::size_t>(n));
  rng.FillNormal(data, 0.0, 1.0);
  ClampInPlace(data, {-6.0, 6.0});
  std::sort(data.begin(), data.end());
  return data;
}

void BM_ExpqSelectBinFast(benchmark::State& state) {
  const std::vector<double> data = SortedNormalData(state.range(0));
  const QuantileRank rank = MedianRank(state.range(0));
  SeededRandom rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ExpqSelectBin(data, rank, 0.1, {-6.0, 6.0}, rng));
  }
}
BENCHMARK(BM_ExpqSelectBinFast)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ExpqSelectBinReference(benchmark::State& state) {
  const std::vector<double> data = SortedNormalData(state.range(0));
  const QuantileRank rank = MedianRank(state.range(0));
  SeededRandom rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::ExpqSelectBin(data, rank, 0.1, {-6.0, 6.0}, rng));
  }
}
BENCHMARK(BM_ExpqSelectBinReference)->Arg(100)->Arg(1000)->Arg(10000);

std::vector<TrialGroup> BenchGroups() {
  std::vector<TrialGroup> groups;
  for (Method m : {Method::kSymQ, Method::kNoisyMad}) {
    TrialGroup g;
    g.spec = MethodSpec{m, 0.1, {-6.0, 6.0}, EstimatorParams::Defaults(m), {}};
    g.n = 1000;
    g.alphas = {0.05};
    groups.push_back(g);
  }
  return groups;
}

constexpr TrialSettings kBenchSettings{0.0, 1.0, 8, 100, 3, true};

void BM_RunGroupsParallel(benchmark::State& state) {
  const std::vector<TrialGroup> groups = BenchGroups();
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunGroups(groups, kBenchSettings,
                                       RunOptions{static_cast<int>(
                                           state.range(0))}));
  }
}
BENCHMARK(BM_RunGroupsParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RunGroupsSerialReference(benchmark::State& state) {
  const std::vector<TrialGroup> groups = BenchGroups();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::RunGroupsSerial(groups, kBenchSettings));
  }
}
BENCHMARK(BM_RunGroupsSerialReference)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpci

BENCHMARK_MAIN();
