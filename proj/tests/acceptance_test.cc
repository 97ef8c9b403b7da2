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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed here and must not be
// loosened to make a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "boost/math/distributions/chi_squared.hpp"
#include "dpci/cli.h"
#include "dpci/core.h"
#include "dpci/estimators.h"
#include "dpci/mechanisms.h"
#include "dpci/random.h"
#include "dpci/simulate.h"
#include "fmt/core.h"
#include "test_util.h"

namespace dpci {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Grid {0, 0.25, 0.5, 0.75, 1} on [0, 1].
const std::vector<double> kFivePointGrid = {0, 0.25, 0.5, 0.75, 1};

Outcome DpCertificate() {
  double worst = 0;
  bool pass = true;
  for (double eps : {0.1, 1.0, 5.0}) {
    double worst_eps = 0;
    testing::ForEachNeighborPair(
        kFivePointGrid, 3, [&](const auto& x, const auto& y) {
          for (int64_t m = 1; m <= 3; ++m) {
            for (int k = 0; k < 50; ++k) {
              const double at = (k + 0.5) / 50;
              const double a = *ExpqExactDensity(x, {m}, eps, {0, 1}, at);
              const double b = *ExpqExactDensity(y, {m}, eps, {0, 1}, at);
              worst_eps = std::max(worst_eps, a / b);
            }
          }
        });
    const double normalized = worst_eps / std::exp(eps);
    worst = std::max(worst, normalized);
    pass = pass && normalized <= 1 + 1e-9;
  }
  return {pass, fmt::format("max ratio / e^eps = {:.12f} (limit 1 + 1e-9)",
                            worst)};
}

Outcome SensitivityBounds() {
  // Bounds hold up to a few ulps of accumulated rounding.
  constexpr double kSlack = 1e-12;
  bool pass = true;
  std::string detail;
  for (int n : {2, 3}) {
    double mean = 0, var = 0, mad = 0;
    testing::ForEachNeighborPair(
        kFivePointGrid, n, [&](const auto& x, const auto& y) {
          mean = std::max(mean, std::abs(*SampleMean(x) - *SampleMean(y)));
          var = std::max(var,
                         std::abs(*SampleVariance(x) - *SampleVariance(y)));
          mad = std::max(mad, std::abs(*MeanAbsDeviation(x) * n -
                                       *MeanAbsDeviation(y) * n));
        });
    pass = pass && mean <= 1.0 / n + kSlack && var <= 1.0 / n + kSlack &&
           mad <= 2.0 + kSlack;
    detail += fmt::format("n={}: dmean {:.4f}<={:.4f} ds2 {:.4f}<={:.4f} "
                          "dmadsum {:.4f}<=2; ",
                          n, mean, 1.0 / n, var, 1.0 / n, mad);
  }
  return {pass, detail};
}

Outcome MedianUnbiasedness() {
  SeededRandom rng(20260101);
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int half = static_cast<int>(rng.Uniform() * 11);  // n = 1..21 odd
    const double center = 10 * (rng.Uniform() - 0.5);
    const double reach = 1 + 5 * rng.Uniform();
    std::vector<double> v = {center};
    for (int i = 0; i < half; ++i) {
      const double d = reach * rng.Uniform();
      v.push_back(center + d);
      v.push_back(center - d);
    }
    const double eps = 0.05 + 5 * rng.Uniform();
    const QuantileRank m = MedianRank(static_cast<int64_t>(v.size()));
    const double expected =
        *ExpqExpectedValue(v, m, eps, {center - reach, center + reach});
    worst = std::max(worst, std::abs(expected - center));
  }
  return {worst <= 1e-10,
          fmt::format("max |E - median| = {:.3g} over 100 databases", worst)};
}

Outcome SamplerLaw() {
  struct Instance {
    std::vector<double> values;
    int64_t rank;
    double eps;
    DataBounds bounds;
  };
  const std::vector<Instance> instances = {
      {{1, 2, 3}, 2, 2.0, {0, 4}},
      {{0.5}, 1, 1.0, {0, 1}},
      {{2, 2, 2}, 2, 1.0, {0, 4}},
      {{0.1, 0.9, 0.3, 0.7, 0.5}, 4, 5.0, {0, 1}},
      {{-5, 6, 0, 1}, 1, 0.3, {-6, 6}},
  };
  bool pass = true;
  std::string detail;
  std::uint64_t seed = 500;
  for (const Instance& inst : instances) {
    std::vector<double> sorted = inst.values;
    std::sort(sorted.begin(), sorted.end());
    const auto p = testing::BruteForceBinProbabilities(
        inst.values, inst.rank, inst.eps, inst.bounds.xmin, inst.bounds.xmax);
    std::vector<int> counts(p.size(), 0);
    SeededRandom rng(seed++);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      ++counts[*ExpqSelectBin(sorted, {inst.rank}, inst.eps, inst.bounds,
                              rng)];
    }
    double stat = 0;
    int cells = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0) {
        pass = pass && counts[i] == 0;
        continue;
      }
      const double e = p[i] * draws;
      stat += (counts[i] - e) * (counts[i] - e) / e;
      ++cells;
    }
    const double critical = boost::math::quantile(
        boost::math::chi_squared(cells - 1), 1 - 1e-3);
    pass = pass && stat <= critical;
    detail += fmt::format("{:.2f}<={:.2f} ", stat, critical);
  }
  return {pass, "chi2 per instance: " + detail};
}

MethodSpec Spec(Method m, double eps, DataBounds bounds) {
  return MethodSpec{m, eps, bounds, EstimatorParams::Defaults(m), OraParams{}};
}

Outcome CoverageValidity() {
  ExperimentGrid grid;
  grid.methods = {Method::kSymQ, Method::kNoisyMad};
  grid.n_values = {1000};
  grid.epsilons = {0.1};
  grid.bounds = {{-6, 6}};
  grid.alphas = {0.05, 0.1, 0.32};
  grid.settings = TrialSettings{0, 1, 2000, 500, 5, true};
  auto records = RunExperiment(grid);
  if (!records.ok()) return {false, std::string(records.status().message())};
  bool pass = true;
  std::string detail;
  for (const CellRecord& r : *records) {
    const double a = r.cell.alpha;
    const double floor = (1 - a) - 3 * std::sqrt(a * (1 - a) / 2000);
    pass = pass && r.coverage >= floor;
    detail += fmt::format("{}@{}: {:.4f}>={:.4f} ", std::string(MethodName(r.cell.method)),
                          a, r.coverage, floor);
  }
  return {pass, detail};
}

// Mean MoE for SYMQ and NOISYMAD at n in {200, 2000} and both bounds; shared
// by the crossover and range criteria.
struct MoeTable {
  absl::Status status;
  double symq[2][2] = {};      // [n index][bounds index]
  double noisymad[2][2] = {};
};

MoeTable RunMoeTable() {
  ExperimentGrid grid;
  grid.methods = {Method::kSymQ, Method::kNoisyMad};
  grid.n_values = {200, 2000};
  grid.epsilons = {0.1};
  grid.bounds = {{-6, 6}, {-32, 32}};
  grid.alphas = {0.05};
  grid.settings = TrialSettings{0, 1, 500, 1000, 6, true};
  MoeTable table;
  auto records = RunExperiment(grid);
  if (!records.ok()) {
    table.status = records.status();
    return table;
  }
  for (const CellRecord& r : *records) {
    const int ni = r.cell.n == 200 ? 0 : 1;
    const int bi = r.cell.bounds.xmax == 6 ? 0 : 1;
    (r.cell.method == Method::kSymQ ? table.symq : table.noisymad)[ni][bi] =
        r.mean_moe;
  }
  return table;
}

Outcome Crossover(const MoeTable& t) {
  if (!t.status.ok()) return {false, std::string(t.status.message())};
  const bool pass =
      t.symq[1][0] < t.noisymad[1][0] && t.noisymad[0][0] < t.symq[0][0];
  return {pass, fmt::format("n=2000: symq {:.4f} vs noisymad {:.4f}; "
                            "n=200: noisymad {:.4f} vs symq {:.4f}",
                            t.symq[1][0], t.noisymad[1][0], t.noisymad[0][0],
                            t.symq[0][0])};
}

Outcome RangeInsensitivity(const MoeTable& t) {
  if (!t.status.ok()) return {false, std::string(t.status.message())};
  const double symq_change = std::abs(t.symq[1][1] / t.symq[1][0] - 1);
  const double noisymad_growth = t.noisymad[1][1] / t.noisymad[1][0];
  return {symq_change < 0.10 && noisymad_growth > 2,
          fmt::format("symq change {:.2f}% (<10%), noisymad growth {:.2f}x "
                      "(>2x)",
                      100 * symq_change, noisymad_growth)};
}

Outcome HeadlineRatio() {
  ExperimentGrid grid;
  grid.methods = {Method::kPublic, Method::kSymQ, Method::kOra};
  grid.n_values = {2782};
  grid.epsilons = {0.1};
  grid.bounds = {{-32, 32}};
  grid.alphas = {0.05};
  grid.settings = TrialSettings{0, 1, 300, 1000, 7, true};
  auto records = RunExperiment(grid);
  if (!records.ok()) return {false, std::string(records.status().message())};
  const double pub = (*records)[0].mean_moe;
  const double symq = (*records)[1].mean_moe / pub;
  const double ora = (*records)[2].mean_moe / pub;
  return {symq >= 1.9 && symq <= 3.1 && ora >= 3 * symq,
          fmt::format("symq/public {:.3f} in [1.9, 3.1]; ora/public {:.2f} "
                      ">= 3 x {:.3f}",
                      symq, ora, symq)};
}

Outcome SweepShape() {
  struct Case {
    Method method;
    const char* param;
    std::vector<double> values;
    double lo, hi;
  };
  const std::vector<double> rho = {0.1, 0.2, 0.3, 0.4, 0.5,
                                   0.6, 0.7, 0.8, 0.9};
  const std::vector<Case> cases = {
      {Method::kNoisyVar, "rho", rho, 0.7, 0.9},
      {Method::kNoisyMad, "rho", rho, 0.7, 0.9},
      {Method::kMod, "rho", rho, 0.4, 0.6},
      {Method::kSymQ, "b",
       {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45}, 0.25, 0.5},
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    SweepSpec spec;
    spec.method = c.method;
    spec.param = c.param;
    spec.values = c.values;
    spec.n = 1000;
    spec.epsilon = 0.1;
    spec.bounds = {-6, 6};
    spec.alpha = 0.05;
    spec.settings = TrialSettings{0, 1, 200, 1000, 8, true};
    spec.base = EstimatorParams::Defaults(c.method);
    auto records = SweepParam(spec);
    if (!records.ok()) return {false, std::string(records.status().message())};
    const auto best = std::min_element(
        records->begin(), records->end(),
        [](const SweepRecord& a, const SweepRecord& b) {
          return a.mean_moe < b.mean_moe;
        });
    const bool ok = best->value >= c.lo - 1e-12 && best->value <= c.hi + 1e-12;
    pass = pass && ok;
    detail += fmt::format("{} {} min at {} in [{}, {}]; ",
                          std::string(MethodName(c.method)), c.param, best->value, c.lo,
                          c.hi);
  }
  return {pass, detail};
}

std::string RunCli(const std::vector<std::string>& args,
                   const std::string& input, int* code) {
  std::istringstream in(input);
  std::ostringstream out, err;
  *code = cli::Run(args, in, out, err);
  return out.str();
}

Outcome Determinism() {
  SeededRandom rng(3);
  std::vector<double> v(400);
  rng.FillNormal(v, 0, 1);
  std::string data;
  for (double x : v) data += cli::FormatDouble(x) + "\n";
  std::vector<std::vector<std::string>> commands;
  for (const char* m : {"noisyvar", "noisymad", "cenq", "symq", "mod",
                        "public", "ora", "vadhan"}) {
    commands.push_back({"ci", "--input", "-", "--method", m, "--epsilon",
                        "0.5", "--xmin", "-6", "--xmax", "6", "--seed", "42",
                        "--nsim", "200"});
  }
  commands.push_back({"experiment", "--mode", "coverage", "--methods",
                      "symq,noisymad,vadhan", "--n-grid", "100", "--trials",
                      "10", "--nsim", "50", "--seed", "9", "--jobs", "3"});
  commands.push_back({"sweep", "--method", "cenq", "--param", "b", "--values",
                      "0.6,0.75", "--n", "100", "--trials", "5", "--nsim",
                      "50", "--seed", "9"});
  commands.push_back({"bias", "--b-grid", "0.5,0.8", "--trials", "50",
                      "--seed", "9"});
  int identical = 0;
  for (const auto& args : commands) {
    int c1 = -1, c2 = -1;
    const std::string a = RunCli(args, data, &c1);
    const std::string b = RunCli(args, data, &c2);
    if (c1 == 0 && c2 == 0 && !a.empty() && a == b) ++identical;
  }
  return {identical == static_cast<int>(commands.size()),
          fmt::format("{}/{} commands byte-identical on rerun", identical,
                      commands.size())};
}

int Main() {
  int failures = 0;
  auto report = [&](int id, const char* name,
                    const std::function<Outcome()>& run) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = run();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL",
                id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  };
  report(1, "quantile sampler DP certificate", DpCertificate);
  report(2, "sensitivity bounds", SensitivityBounds);
  report(3, "median unbiasedness", MedianUnbiasedness);
  report(4, "quantile sampler law", SamplerLaw);
  report(5, "coverage validity", CoverageValidity);
  MoeTable table;
  report(6, "crossover rule of thumb", [&] {
    table = RunMoeTable();
    return Crossover(table);
  });
  report(7, "range insensitivity", [&] { return RangeInsensitivity(table); });
  report(8, "headline ratio", HeadlineRatio);
  report(9, "parameter sweep shape", SweepShape);
  report(10, "CLI determinism", Determinism);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace dpci

int main() { return dpci::Main(); }
