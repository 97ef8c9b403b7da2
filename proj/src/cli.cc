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

#include "dpci/cli.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "dpci/baselines.h"
#include "dpci/core.h"
#include "dpci/estimators.h"
#include "dpci/simulate.h"
#include "dpci/status_macros.h"
#include "fmt/format.h"
#include "json.hpp"

namespace dpci::cli {
namespace {

using Json = nlohmann::ordered_json;

std::optional<double> ParseNumber(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

absl::StatusOr<std::vector<double>> ParseDoubleList(absl::string_view text,
                                                    absl::string_view flag) {
  std::vector<double> out;
  for (absl::string_view token :
       absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    const std::optional<double> v = ParseNumber(token);
    if (!v) {
      return absl::InvalidArgumentError(
          absl::StrCat(flag, ": '", token, "' is not a finite number"));
    }
    out.push_back(*v);
  }
  return out;
}

absl::StatusOr<std::vector<int64_t>> ParseIntList(absl::string_view text,
                                                  absl::string_view flag) {
  std::vector<int64_t> out;
  for (absl::string_view token :
       absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    token = absl::StripAsciiWhitespace(token);
    int64_t value = 0;
    const auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat(flag, ": '", token, "' is not an integer"));
    }
    out.push_back(value);
  }
  return out;
}

absl::StatusOr<DataBounds> ParseBoundsPair(absl::string_view token) {
  const std::vector<absl::string_view> parts = absl::StrSplit(token, ':');
  if (parts.size() == 2) {
    const std::optional<double> lo = ParseNumber(parts[0]);
    const std::optional<double> hi = ParseNumber(parts[1]);
    if (lo && hi) {
      const DataBounds bounds{*lo, *hi};
      DPCI_RETURN_IF_ERROR(ValidateBounds(bounds));
      return bounds;
    }
  }
  return absl::InvalidArgumentError(
      absl::StrCat("bounds '", token, "' must look like xmin:xmax"));
}

absl::StatusOr<std::vector<DataBounds>> ParseBoundsList(
    absl::string_view text) {
  std::vector<DataBounds> out;
  for (absl::string_view token :
       absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    DPCI_ASSIGN_OR_RETURN(const DataBounds bounds,
                          ParseBoundsPair(absl::StripAsciiWhitespace(token)));
    out.push_back(bounds);
  }
  return out;
}

absl::StatusOr<std::vector<Method>> ParseMethodList(absl::string_view text) {
  std::vector<Method> out;
  for (absl::string_view token :
       absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    DPCI_ASSIGN_OR_RETURN(const Method m,
                          ParseMethod(absl::StripAsciiWhitespace(token)));
    out.push_back(m);
  }
  return out;
}

// Applies "method.param=value" overrides on top of the defaults.
absl::StatusOr<std::map<Method, EstimatorParams>> ParseOverrides(
    const std::vector<std::string>& settings) {
  std::map<Method, EstimatorParams> out;
  for (const std::string& setting : settings) {
    const std::vector<absl::string_view> kv = absl::StrSplit(setting, '=');
    const std::vector<absl::string_view> key =
        kv.empty() ? std::vector<absl::string_view>{}
                   : absl::StrSplit(kv[0], '.');
    std::optional<double> value;
    if (kv.size() == 2) value = ParseNumber(kv[1]);
    if (kv.size() != 2 || key.size() != 2 || !value ||
        (key[1] != "rho" && key[1] != "b")) {
      return absl::InvalidArgumentError(absl::StrCat(
          "--set '", setting, "' must look like method.rho=v or method.b=v"));
    }
    DPCI_ASSIGN_OR_RETURN(const Method m, ParseMethod(key[0]));
    auto it = out.try_emplace(m, EstimatorParams::Defaults(m)).first;
    (key[1] == "rho" ? it->second.rho : it->second.b) = *value;
  }
  return out;
}

std::string Hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

absl::StatusOr<std::string> ReadAll(const std::string& path,
                                    std::istream& in) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  }
  return std::string(std::istreambuf_iterator<char>(file),
                     std::istreambuf_iterator<char>());
}

// Everything a command needs to describe itself in its manifest.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  Json config = Json::object();
  std::string input_path;
  std::optional<std::uint64_t> input_digest;
  std::string manifest_path;
};

int EmitManifest(const Manifest& m, double seconds, std::ostream& err) {
  Json doc;
  doc["tool"] = "dpci";
  doc["version"] = std::string(kVersion);
  doc["command"] = m.command;
  doc["argv"] = m.argv;
  doc["config"] = m.config;
  if (!m.input_path.empty()) doc["input"] = m.input_path;
  if (m.input_digest) {
    doc["input_digest"] = "fnv1a64:" + Hex64(*m.input_digest);
  }
  doc["duration_seconds"] = seconds;
  const std::string text = doc.dump(2) + "\n";
  if (m.manifest_path.empty()) {
    err << text;
    return kExitOk;
  }
  std::ofstream file(m.manifest_path, std::ios::binary | std::ios::trunc);
  file << text;
  if (!file) {
    err << "error: cannot write manifest '" << m.manifest_path << "'\n";
    return kExitUsage;
  }
  return kExitOk;
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

int Fail(std::ostream& err, int code, absl::string_view message) {
  err << "error: " << message << "\n";
  return code;
}

Json BoundsJson(const DataBounds& b) { return Json::array({b.xmin, b.xmax}); }

struct CiFlags {
  std::string input;
  bool header = false;
  std::string method = "symq";
  double epsilon = 1.0;
  std::optional<double> xmin;
  std::optional<double> xmax;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int nsim = 1000;
  std::optional<double> rho;
  std::optional<double> b;
  int64_t subsets = 0;
  double sd_max = 0.0;
  bool no_clamp_synthetic = false;
};

int RunCi(const CiFlags& f, Manifest& manifest, std::istream& in,
          std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::string> text = ReadAll(f.input, in);
  if (!text.ok()) return Fail(err, kExitBadInput, text.status().message());
  manifest.input_path = f.input;
  manifest.input_digest = Fnv1a64(*text);
  absl::StatusOr<std::vector<double>> raw = ParseValues(*text, f.header);
  if (!raw.ok()) return Fail(err, kExitBadInput, raw.status().message());

  absl::StatusOr<Method> method = ParseMethod(f.method);
  if (!method.ok()) return Fail(err, kExitBadParams, method.status().message());
  if (!(f.alpha > 0 && f.alpha < 1)) {
    return Fail(err, kExitBadParams, "alpha must lie in (0, 1)");
  }
  if (f.nsim < 1) return Fail(err, kExitBadParams, "nsim must be >= 1");
  if (f.xmin.has_value() != f.xmax.has_value()) {
    return Fail(err, kExitBadParams, "give both --xmin and --xmax");
  }
  const bool has_bounds = f.xmin.has_value();
  if (!has_bounds && *method != Method::kPublic) {
    return Fail(err, kExitBadParams,
                absl::StrCat(f.method, " needs --xmin and --xmax"));
  }

  MethodSpec spec;
  spec.method = *method;
  spec.epsilon = f.epsilon;
  spec.params = EstimatorParams::Defaults(*method);
  if (f.rho) spec.params.rho = *f.rho;
  if (f.b) spec.params.b = *f.b;
  spec.ora = OraParams{f.subsets, f.sd_max};
  if (has_bounds) {
    spec.bounds = DataBounds{*f.xmin, *f.xmax};
    if (absl::Status s = ValidateMethodSpec(spec); !s.ok()) {
      return Fail(err, kExitBadParams, s.message());
    }
  }

  const auto n = static_cast<int64_t>(raw->size());
  if (n < MinimumSize(*method)) {
    return Fail(err, kExitTooSmall,
                absl::StrCat(f.method, " needs at least ",
                             MinimumSize(*method), " values, got ", n));
  }

  int64_t clamped_count = 0;
  std::vector<double> data = *raw;
  if (has_bounds) {
    clamped_count = std::count_if(data.begin(), data.end(), [&](double v) {
      return !spec.bounds.Contains(v);
    });
    ClampInPlace(data, spec.bounds);
  }

  manifest.config["method"] = f.method;
  manifest.config["epsilon"] = f.epsilon;
  manifest.config["rho"] = spec.params.rho;
  manifest.config["b"] = spec.params.b;
  if (has_bounds) manifest.config["bounds"] = BoundsJson(spec.bounds);
  manifest.config["alpha"] = f.alpha;
  manifest.config["nsim"] = f.nsim;
  manifest.config["seed"] = f.seed;
  manifest.config["clamp_synthetic"] = !f.no_clamp_synthetic;
  manifest.config["header"] = f.header;

  absl::StatusOr<ConfidenceInterval> ci;
  if (*method == Method::kPublic && !has_bounds) {
    ci = PublicCi(data, f.alpha);
  } else {
    const double alphas[] = {f.alpha};
    auto intervals = BuildIntervals(spec, data, alphas, f.nsim,
                                    !f.no_clamp_synthetic, f.seed);
    if (intervals.ok()) {
      ci = intervals->front();
    } else {
      ci = intervals.status();
    }
  }
  if (!ci.ok()) return Fail(err, ci.status());

  const int nsim = *method == Method::kPublic || *method == Method::kVadhan
                       ? 0
                       : f.nsim;
  out << "{\"lower\":" << FormatDouble(ci->lower)
      << ",\"upper\":" << FormatDouble(ci->upper)
      << ",\"moe\":" << FormatDouble(ci->moe)
      << ",\"center\":" << FormatDouble(ci->center)
      << ",\"spread\":" << FormatDouble(ci->spread) << ",\"method\":\""
      << MethodName(*method) << "\",\"alpha\":" << FormatDouble(f.alpha)
      << ",\"epsilon\":" << FormatDouble(f.epsilon) << ",\"seed\":" << f.seed
      << ",\"nsim\":" << nsim << ",\"n\":" << n
      << ",\"clamped_count\":" << clamped_count << ",\"spread_floored\":"
      << (ci->spread_floored ? "true" : "false") << "}\n";
  return kExitOk;
}

struct GridFlags {
  std::string mode;
  std::string methods = "symq,noisymad";
  std::string n_grid = "1000";
  std::string eps_grid = "0.1";
  std::string bounds = "-6:6";
  std::string alpha_grid = "0.05";
  int trials = 100;
  int nsim = 1000;
  std::uint64_t seed = 0;
  double mu = 0.0;
  double sigma = 1.0;
  int jobs = 0;
  bool no_clamp_synthetic = false;
  std::vector<std::string> overrides;
};

int RunExperimentCommand(const GridFlags& f, Manifest& manifest,
                         std::ostream& out, std::ostream& err) {
  if (f.mode != "coverage" && f.mode != "moe") {
    return Fail(err, kExitBadParams, "--mode must be coverage or moe");
  }
  ExperimentGrid grid;
  {
    auto methods = ParseMethodList(f.methods);
    if (!methods.ok()) return Fail(err, kExitBadParams, methods.status().message());
    auto ns = ParseIntList(f.n_grid, "--n-grid");
    if (!ns.ok()) return Fail(err, kExitBadParams, ns.status().message());
    auto eps = ParseDoubleList(f.eps_grid, "--eps-grid");
    if (!eps.ok()) return Fail(err, kExitBadParams, eps.status().message());
    auto bounds = ParseBoundsList(f.bounds);
    if (!bounds.ok()) return Fail(err, kExitBadParams, bounds.status().message());
    auto alphas = ParseDoubleList(f.alpha_grid, "--alpha-grid");
    if (!alphas.ok()) return Fail(err, kExitBadParams, alphas.status().message());
    auto overrides = ParseOverrides(f.overrides);
    if (!overrides.ok()) {
      return Fail(err, kExitBadParams, overrides.status().message());
    }
    grid.methods = *methods;
    grid.n_values = *ns;
    grid.epsilons = *eps;
    grid.bounds = *bounds;
    grid.alphas = *alphas;
    grid.params = *overrides;
  }
  grid.settings = TrialSettings{f.mu, f.sigma, f.trials, f.nsim, f.seed,
                                !f.no_clamp_synthetic};
  if (absl::Status s = ValidateGrid(grid); !s.ok()) return Fail(err, s);

  manifest.config["mode"] = f.mode;
  manifest.config["methods"] = f.methods;
  manifest.config["n_grid"] = grid.n_values;
  manifest.config["eps_grid"] = grid.epsilons;
  manifest.config["bounds"] = f.bounds;
  manifest.config["alpha_grid"] = grid.alphas;
  manifest.config["trials"] = f.trials;
  manifest.config["nsim"] = f.nsim;
  manifest.config["seed"] = f.seed;
  manifest.config["mu"] = f.mu;
  manifest.config["sigma"] = f.sigma;
  manifest.config["clamp_synthetic"] = !f.no_clamp_synthetic;
  manifest.config["set"] = f.overrides;
  manifest.config["jobs"] = f.jobs;

  auto records = RunExperiment(grid, RunOptions{f.jobs});
  if (!records.ok()) return Fail(err, records.status());
  const bool coverage = f.mode == "coverage";
  out << "method,n,epsilon,xmin,xmax,alpha,metric,value,stderr,trials\n";
  for (const CellRecord& r : *records) {
    out << MethodName(r.cell.method) << ',' << r.cell.n << ','
        << FormatDouble(r.cell.epsilon) << ','
        << FormatDouble(r.cell.bounds.xmin) << ','
        << FormatDouble(r.cell.bounds.xmax) << ','
        << FormatDouble(r.cell.alpha) << ',' << f.mode << ','
        << FormatDouble(coverage ? r.coverage : r.mean_moe) << ','
        << FormatDouble(coverage ? r.coverage_stderr : r.moe_stderr) << ','
        << r.trials << '\n';
  }
  return kExitOk;
}

struct SweepFlags {
  std::string method;
  std::string param;
  std::string values;
  int64_t n = 1000;
  double epsilon = 0.1;
  std::string bounds = "-6:6";
  double alpha = 0.05;
  int trials = 200;
  int nsim = 1000;
  std::uint64_t seed = 0;
  double mu = 0.0;
  double sigma = 1.0;
  int jobs = 0;
  std::optional<double> rho;
  std::optional<double> b;
};

int RunSweepCommand(const SweepFlags& f, Manifest& manifest,
                    std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  auto method = ParseMethod(f.method);
  if (!method.ok()) return Fail(err, kExitBadParams, method.status().message());
  auto values = ParseDoubleList(f.values, "--values");
  if (!values.ok()) return Fail(err, kExitBadParams, values.status().message());
  auto bounds = ParseBoundsPair(f.bounds);
  if (!bounds.ok()) return Fail(err, kExitBadParams, bounds.status().message());
  spec.method = *method;
  spec.param = f.param;
  spec.values = *values;
  spec.n = f.n;
  spec.epsilon = f.epsilon;
  spec.bounds = *bounds;
  spec.alpha = f.alpha;
  spec.settings = TrialSettings{f.mu, f.sigma, f.trials, f.nsim, f.seed, true};
  spec.base = EstimatorParams::Defaults(*method);
  if (f.rho) spec.base.rho = *f.rho;
  if (f.b) spec.base.b = *f.b;
  if (absl::Status s = ValidateSweep(spec); !s.ok()) return Fail(err, s);

  manifest.config["method"] = f.method;
  manifest.config["param"] = f.param;
  manifest.config["values"] = spec.values;
  manifest.config["n"] = f.n;
  manifest.config["epsilon"] = f.epsilon;
  manifest.config["bounds"] = BoundsJson(spec.bounds);
  manifest.config["alpha"] = f.alpha;
  manifest.config["trials"] = f.trials;
  manifest.config["nsim"] = f.nsim;
  manifest.config["seed"] = f.seed;
  manifest.config["mu"] = f.mu;
  manifest.config["sigma"] = f.sigma;
  manifest.config["base_rho"] = spec.base.rho;
  manifest.config["base_b"] = spec.base.b;
  manifest.config["jobs"] = f.jobs;

  auto records = SweepParam(spec, RunOptions{f.jobs});
  if (!records.ok()) return Fail(err, records.status());
  out << "method,param,value,n,epsilon,mean_moe,stderr\n";
  for (const SweepRecord& r : *records) {
    out << MethodName(r.method) << ',' << r.param << ','
        << FormatDouble(r.value) << ',' << r.n << ','
        << FormatDouble(r.epsilon) << ',' << FormatDouble(r.mean_moe) << ','
        << FormatDouble(r.moe_stderr) << '\n';
  }
  return kExitOk;
}

struct BiasFlags {
  std::string n_grid = "50";
  std::string eps_grid = "0.1";
  std::string b_grid = "0.5";
  std::string bounds = "-6:6";
  int trials = 1000;
  std::uint64_t seed = 0;
  double mu = 0.0;
  double sigma = 1.0;
  int jobs = 0;
};

int RunBiasCommand(const BiasFlags& f, Manifest& manifest, std::ostream& out,
                   std::ostream& err) {
  auto ns = ParseIntList(f.n_grid, "--n-grid");
  if (!ns.ok()) return Fail(err, kExitBadParams, ns.status().message());
  auto eps = ParseDoubleList(f.eps_grid, "--eps-grid");
  if (!eps.ok()) return Fail(err, kExitBadParams, eps.status().message());
  auto bs = ParseDoubleList(f.b_grid, "--b-grid");
  if (!bs.ok()) return Fail(err, kExitBadParams, bs.status().message());
  auto bounds = ParseBoundsPair(f.bounds);
  if (!bounds.ok()) return Fail(err, kExitBadParams, bounds.status().message());
  if (ns->empty() || eps->empty() || bs->empty()) {
    return Fail(err, kExitBadParams, "empty grid");
  }
  std::vector<BiasSpec> specs;
  for (int64_t n : *ns) {
    for (double e : *eps) {
      for (double b : *bs) {
        BiasSpec spec{n, e, b, *bounds, f.mu, f.sigma, f.trials, f.seed};
        if (absl::Status s = ValidateBias(spec); !s.ok()) {
          return Fail(err, kExitBadParams, s.message());
        }
        specs.push_back(spec);
      }
    }
  }

  manifest.config["n_grid"] = *ns;
  manifest.config["eps_grid"] = *eps;
  manifest.config["b_grid"] = *bs;
  manifest.config["bounds"] = BoundsJson(*bounds);
  manifest.config["trials"] = f.trials;
  manifest.config["seed"] = f.seed;
  manifest.config["mu"] = f.mu;
  manifest.config["sigma"] = f.sigma;
  manifest.config["jobs"] = f.jobs;

  std::ostringstream rows;
  rows << "n,epsilon,b,bias,stderr,trials\n";
  for (const BiasSpec& spec : specs) {
    auto rec = BiasCurve(spec, RunOptions{f.jobs});
    if (!rec.ok()) return Fail(err, rec.status());
    rows << rec->n << ',' << FormatDouble(rec->epsilon) << ','
         << FormatDouble(rec->b) << ',' << FormatDouble(rec->bias) << ','
         << FormatDouble(rec->standard_error) << ',' << rec->trials << '\n';
  }
  out << rows.str();
  return kExitOk;
}

// Drops --manifest so a replay never overwrites the file it reads.
std::vector<std::string> StripManifestFlag(std::vector<std::string> args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--manifest") {
      ++i;
      continue;
    }
    if (args[i].rfind("--manifest=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

int RunReplay(const std::string& path, std::istream& in, std::ostream& out,
              std::ostream& err) {
  std::ifstream file(path, std::ios::binary);
  if (!file) return Fail(err, kExitBadInput, "cannot open manifest " + path);
  Json doc = Json::parse(file, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.contains("argv") ||
      !doc["argv"].is_array()) {
    return Fail(err, kExitBadInput, "manifest is not valid JSON with argv");
  }
  std::vector<std::string> args;
  for (const Json& a : doc["argv"]) {
    if (!a.is_string()) {
      return Fail(err, kExitBadInput, "manifest argv must hold strings");
    }
    args.push_back(a.get<std::string>());
  }
  if (!args.empty() && args.front() == "replay") {
    return Fail(err, kExitBadInput, "manifest records a replay");
  }
  if (doc.contains("input") && doc.contains("input_digest") &&
      doc["input"] != "-") {
    auto text = ReadAll(doc["input"].get<std::string>(), in);
    if (!text.ok()) return Fail(err, kExitBadInput, text.status().message());
    const std::string digest = "fnv1a64:" + Hex64(Fnv1a64(*text));
    if (digest != doc["input_digest"].get<std::string>()) {
      return Fail(err, kExitBadInput,
                  "input file changed since the manifest was written");
    }
  }
  return Run(StripManifestFlag(std::move(args)), in, out, err);
}

}  // namespace

std::uint64_t Fnv1a64(absl::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

absl::StatusOr<std::vector<double>> ParseValues(absl::string_view text,
                                                bool header) {
  std::vector<double> values;
  if (text.empty()) return values;
  if (text.back() == '\n') text.remove_suffix(1);
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (header && line_no == 1) continue;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (absl::StripAsciiWhitespace(line).empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": blank line"));
    }
    const std::optional<double> v = ParseNumber(line);
    if (!v) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": '", line, "' is not a finite number"));
    }
    values.push_back(*v);
  }
  return values;
}

std::string FormatDouble(double value) {
  return fmt::format("{:.17g}", value);
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
      return kExitBadParams;
    case absl::StatusCode::kFailedPrecondition:
      return kExitTooSmall;
    default:
      return kExitUsage;
  }
}

int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Differentially private confidence intervals for a mean"};
  app.name("dpci");
  app.require_subcommand(1);
  std::string manifest_path;

  CiFlags ci;
  CLI::App* ci_cmd = app.add_subcommand("ci", "One interval for a data file");
  ci_cmd->add_option("--input", ci.input, "Data file, one value per line; - for stdin")
      ->required();
  ci_cmd->add_flag("--header", ci.header, "Skip the first line");
  ci_cmd->add_option("--method", ci.method, "noisyvar|noisymad|cenq|symq|mod|public|ora|vadhan");
  ci_cmd->add_option("--epsilon", ci.epsilon, "Total privacy budget");
  ci_cmd->add_option("--xmin", ci.xmin, "Lower clamp bound");
  ci_cmd->add_option("--xmax", ci.xmax, "Upper clamp bound");
  ci_cmd->add_option("--alpha", ci.alpha, "Miss probability");
  ci_cmd->add_option("--seed", ci.seed, "Random seed");
  ci_cmd->add_option("--nsim", ci.nsim, "Simulated databases for SIM");
  ci_cmd->add_option("--rho", ci.rho, "Budget fraction for the center");
  ci_cmd->add_option("--b", ci.b, "Quantile fraction (cenq, symq)");
  ci_cmd->add_option("--subsets", ci.subsets, "ora: number of subsets (0 = n/2)");
  ci_cmd->add_option("--sd-max", ci.sd_max, "ora: sd bound (0 = half the range)");
  ci_cmd->add_flag("--no-clamp-synthetic", ci.no_clamp_synthetic,
                   "Do not clamp SIM's synthetic databases");
  ci_cmd->add_option("--manifest", manifest_path, "Write the run manifest here");

  GridFlags grid;
  CLI::App* exp_cmd =
      app.add_subcommand("experiment", "Coverage or MoE over a grid");
  exp_cmd->add_option("--mode", grid.mode, "coverage|moe")->required();
  exp_cmd->add_option("--methods", grid.methods, "Comma-separated methods");
  exp_cmd->add_option("--n-grid", grid.n_grid, "Comma-separated sizes");
  exp_cmd->add_option("--eps-grid", grid.eps_grid, "Comma-separated epsilons");
  exp_cmd->add_option("--bounds", grid.bounds, "Comma-separated xmin:xmax pairs");
  exp_cmd->add_option("--alpha-grid", grid.alpha_grid, "Comma-separated alphas");
  exp_cmd->add_option("--trials", grid.trials, "Trials per cell");
  exp_cmd->add_option("--nsim", grid.nsim, "Simulated databases for SIM");
  exp_cmd->add_option("--seed", grid.seed, "Master seed");
  exp_cmd->add_option("--mu", grid.mu, "True mean");
  exp_cmd->add_option("--sigma", grid.sigma, "True standard deviation");
  exp_cmd->add_option("--jobs", grid.jobs, "Worker threads (0 = all)");
  exp_cmd->add_flag("--no-clamp-synthetic", grid.no_clamp_synthetic,
                    "Do not clamp SIM's synthetic databases");
  exp_cmd->add_option("--set", grid.overrides, "method.rho=v or method.b=v");
  exp_cmd->add_option("--manifest", manifest_path, "Write the run manifest here");

  SweepFlags sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "MoE across values of rho or b");
  sweep_cmd->add_option("--method", sweep.method, "Method to sweep")->required();
  sweep_cmd->add_option("--param", sweep.param, "rho|b")->required();
  sweep_cmd->add_option("--values", sweep.values, "Comma-separated values")
      ->required();
  sweep_cmd->add_option("--n", sweep.n, "Database size");
  sweep_cmd->add_option("--epsilon", sweep.epsilon, "Privacy budget");
  sweep_cmd->add_option("--bounds", sweep.bounds, "xmin:xmax");
  sweep_cmd->add_option("--alpha", sweep.alpha, "Miss probability");
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per value");
  sweep_cmd->add_option("--nsim", sweep.nsim, "Simulated databases for SIM");
  sweep_cmd->add_option("--seed", sweep.seed, "Master seed");
  sweep_cmd->add_option("--mu", sweep.mu, "True mean");
  sweep_cmd->add_option("--sigma", sweep.sigma, "True standard deviation");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads (0 = all)");
  sweep_cmd->add_option("--rho", sweep.rho, "Fixed rho when sweeping b");
  sweep_cmd->add_option("--b", sweep.b, "Fixed b when sweeping rho");
  sweep_cmd->add_option("--manifest", manifest_path, "Write the run manifest here");

  BiasFlags bias;
  CLI::App* bias_cmd =
      app.add_subcommand("bias", "Bias of the private quantile sampler");
  bias_cmd->add_option("--n-grid", bias.n_grid, "Comma-separated sizes");
  bias_cmd->add_option("--eps-grid", bias.eps_grid, "Comma-separated epsilons");
  bias_cmd->add_option("--b-grid", bias.b_grid, "Comma-separated fractions");
  bias_cmd->add_option("--bounds", bias.bounds, "xmin:xmax");
  bias_cmd->add_option("--trials", bias.trials, "Random databases per row");
  bias_cmd->add_option("--seed", bias.seed, "Master seed");
  bias_cmd->add_option("--mu", bias.mu, "True mean");
  bias_cmd->add_option("--sigma", bias.sigma, "True standard deviation");
  bias_cmd->add_option("--jobs", bias.jobs, "Worker threads (0 = all)");
  bias_cmd->add_option("--manifest", manifest_path, "Write the run manifest here");

  std::string replay_path;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "Rerun the command recorded in a manifest");
  replay_cmd->add_option("--manifest", replay_path, "Manifest to replay")
      ->required();

  std::vector<const char*> argv = {"dpci"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadParams;
  }

  if (replay_cmd->parsed()) return RunReplay(replay_path, in, out, err);

  Manifest manifest;
  manifest.argv = args;
  manifest.manifest_path = manifest_path;
  std::ostringstream buffer;
  int code = kExitUsage;
  if (ci_cmd->parsed()) {
    manifest.command = "ci";
    code = RunCi(ci, manifest, in, buffer, err);
  } else if (exp_cmd->parsed()) {
    manifest.command = "experiment";
    code = RunExperimentCommand(grid, manifest, buffer, err);
  } else if (sweep_cmd->parsed()) {
    manifest.command = "sweep";
    code = RunSweepCommand(sweep, manifest, buffer, err);
  } else if (bias_cmd->parsed()) {
    manifest.command = "bias";
    code = RunBiasCommand(bias, manifest, buffer, err);
  }
  if (code != kExitOk) return code;
  out << buffer.str();
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  return EmitManifest(manifest, seconds, err);
}

}  // namespace dpci::cli
