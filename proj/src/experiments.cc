// Copyright 2026 The dpauction Authors
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

#include "dpauction/experiments.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dpauction/errors.h"
#include "dpauction/price_grid.h"
#include "dpauction/random.h"

#ifndef DPAUCTION_VERSION
#define DPAUCTION_VERSION "unknown"
#endif

namespace dpauction {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr char kMasked[] = "masked";

bool IsCount(double value) {
  return value >= 1.0 && value == std::floor(value) && value <= 1e9;
}

std::string FormatReal(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

template <typename T>
bool ParseNumber(const std::string& text, T& out) {
  const char* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, out);
  return result.ec == std::errc() && result.ptr == end;
}

char Separator(ResultsFormat format) {
  return format == ResultsFormat::kCsv ? ',' : '\t';
}

std::vector<std::string> Split(const std::string& line, char separator) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, separator)) fields.push_back(field);
  if (!line.empty() && line.back() == separator) fields.emplace_back();
  return fields;
}

double Seconds(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

}  // namespace

std::string SweepParameterName(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kGranularity:
      return "granularity";
    case SweepParameter::kK:
      return "k";
    case SweepParameter::kM:
      return "m";
    case SweepParameter::kEpsilon:
      return "epsilon";
  }
  return "unknown";
}

SweepParameter ParseSweepParameter(const std::string& name) {
  for (SweepParameter p : {SweepParameter::kGranularity, SweepParameter::kK,
                           SweepParameter::kM, SweepParameter::kEpsilon}) {
    if (SweepParameterName(p) == name) return p;
  }
  throw ArgumentError("unknown sweep parameter '" + name +
                      "' (expected granularity, k, m or epsilon)");
}

void CheckSweepSpec(const SweepSpec& spec) {
  if (spec.values.empty()) throw ArgumentError("sweep needs at least one value");
  if (spec.trials < 1) throw ArgumentError("trials must be >= 1");
  if (spec.variants.empty()) throw ArgumentError("sweep needs a variant");
  if (!(spec.epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
  if (!(spec.granularity > 0.0)) throw ArgumentError("granularity must be > 0");
  for (double value : spec.values) {
    switch (spec.parameter) {
      case SweepParameter::kK:
      case SweepParameter::kM:
        if (!IsCount(value)) {
          throw ArgumentError(SweepParameterName(spec.parameter) +
                              " values must be positive integers");
        }
        break;
      case SweepParameter::kGranularity:
      case SweepParameter::kEpsilon:
        if (!(value > 0.0) || !std::isfinite(value)) {
          throw ArgumentError(SweepParameterName(spec.parameter) +
                              " values must be positive");
        }
        break;
    }
  }
  GeneratorParams probe = spec.generator;
  if (spec.parameter == SweepParameter::kK) probe.k = 1;
  if (spec.parameter == SweepParameter::kM) probe.m = 1;
  CheckGeneratorParams(probe);
}

GeneratorParams CellGenerator(const SweepSpec& spec, double value, int trial) {
  GeneratorParams params = spec.generator;
  if (spec.parameter == SweepParameter::kK) params.k = static_cast<int>(value);
  if (spec.parameter == SweepParameter::kM) params.m = static_cast<int>(value);
  params.seed = DeriveSeed(DeriveSeed(spec.seed, trial), 0);
  return params;
}

MechanismConfig CellConfig(const SweepSpec& spec, double value, Variant variant,
                           int trial) {
  const double granularity =
      spec.parameter == SweepParameter::kGranularity ? value : spec.granularity;
  MechanismConfig config{
      .epsilon = spec.parameter == SweepParameter::kEpsilon ? value
                                                            : spec.epsilon,
      .grid = PriceGrid(spec.generator.c_range.lo, spec.generator.c_range.hi,
                        granularity),
      .seed = DeriveSeed(DeriveSeed(spec.seed, trial), 1),
      .variant = variant,
      .max_scored_vectors = spec.max_scored_vectors,
  };
  return config;
}

TrialMetrics RunTrial(const Scenario& scenario, const MechanismConfig& config) {
  const double m = static_cast<double>(scenario.num_buyers());
  TrialMetrics metrics;
  const auto start = std::chrono::steady_clock::now();
  if (IsSequential(config.variant)) {
    const SequentialRun run = RunDpamS(scenario, config);
    metrics.seconds = Seconds(std::chrono::steady_clock::now() - start);
    if (config.variant == Variant::kDpamS) {
      const LevelResult& last = run.levels.back();
      double winners = 0.0;
      for (std::size_t t = 0; t < last.winners.size(); ++t) {
        winners += last.distribution.probabilities[t] * last.winners[t];
      }
      metrics.revenue = ExpectedRevenue(last.distribution, last.revenues);
      metrics.satisfaction = m > 0 ? winners / m : 0.0;
    } else {
      metrics.revenue = run.outcome.revenue;
      metrics.satisfaction =
          m > 0 ? run.outcome.allocation.NumAssigned() / m : 0.0;
    }
  } else {
    const JointRun run = RunDpam(scenario, config);
    metrics.seconds = Seconds(std::chrono::steady_clock::now() - start);
    if (config.variant == Variant::kDpam) {
      double winners = 0.0;
      for (std::size_t t = 0; t < run.scores.winners.size(); ++t) {
        winners += run.distribution.probabilities[t] * run.scores.winners[t];
      }
      metrics.revenue = ExpectedRevenue(run.distribution, run.scores.revenues);
      metrics.satisfaction = m > 0 ? winners / m : 0.0;
    } else {
      metrics.revenue = run.outcome.revenue;
      metrics.satisfaction =
          m > 0 ? run.outcome.allocation.NumAssigned() / m : 0.0;
    }
  }
  return metrics;
}

std::vector<MetricsRow> RunSweep(const SweepSpec& spec) {
  CheckSweepSpec(spec);
  const std::size_t num_values = spec.values.size();
  const std::size_t num_variants = spec.variants.size();
  // sums[variant][value]
  std::vector<std::vector<TrialMetrics>> sums(
      num_variants, std::vector<TrialMetrics>(num_values));
  std::vector<std::vector<bool>> skipped(num_variants,
                                         std::vector<bool>(num_values, false));

  for (std::size_t v = 0; v < num_values; ++v) {
    const double value = spec.values[v];
    for (int trial = 0; trial < spec.trials; ++trial) {
      const Scenario scenario = Generate(CellGenerator(spec, value, trial));
      for (std::size_t r = 0; r < num_variants; ++r) {
        if (skipped[r][v]) continue;
        try {
          const TrialMetrics metrics = RunTrial(
              scenario, CellConfig(spec, value, spec.variants[r], trial));
          sums[r][v].revenue += metrics.revenue;
          sums[r][v].satisfaction += metrics.satisfaction;
          sums[r][v].seconds += metrics.seconds;
        } catch (const CapacityError&) {
          skipped[r][v] = true;
        }
      }
    }
  }

  std::vector<MetricsRow> rows;
  for (std::size_t r = 0; r < num_variants; ++r) {
    for (std::size_t v = 0; v < num_values; ++v) {
      MetricsRow row;
      row.variant = spec.variants[r];
      row.swept_parameter = spec.parameter;
      row.swept_value = spec.values[v];
      row.seed = spec.seed;
      if (skipped[r][v]) {
        row.expected_revenue = row.satisfaction = row.running_time_s = kNan;
        row.trials = 0;
      } else {
        row.expected_revenue = sums[r][v].revenue / spec.trials;
        row.satisfaction = sums[r][v].satisfaction / spec.trials;
        row.running_time_s = sums[r][v].seconds / spec.trials;
        row.trials = spec.trials;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

ResultsFormat ParseResultsFormat(const std::string& name) {
  if (name == "csv") return ResultsFormat::kCsv;
  if (name == "tsv") return ResultsFormat::kTsv;
  throw ArgumentError("unknown results format '" + name + "'");
}

std::vector<std::string> ResultsColumns() {
  return {"variant",      "swept_parameter", "swept_value",
          "expected_revenue", "satisfaction", "running_time_s",
          "trials",       "seed"};
}

std::string FormatResults(const std::vector<MetricsRow>& rows,
                          const EmitOptions& options) {
  const char sep = Separator(options.format);
  std::string out;
  const auto columns = ResultsColumns();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += sep;
    out += columns[c];
  }
  out += '\n';
  for (const MetricsRow& row : rows) {
    out += VariantName(row.variant);
    out += sep;
    out += SweepParameterName(row.swept_parameter);
    out += sep;
    out += FormatReal(row.swept_value);
    out += sep;
    out += FormatReal(row.expected_revenue);
    out += sep;
    out += FormatReal(row.satisfaction);
    out += sep;
    out += options.mask_timing ? kMasked : FormatReal(row.running_time_s);
    out += sep;
    out += std::to_string(row.trials);
    out += sep;
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

std::vector<MetricsRow> ParseResults(const std::string& text,
                                     ResultsFormat format) {
  const char sep = Separator(format);
  const auto columns = ResultsColumns();
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  if (!std::getline(in, line)) throw ParseError("results file is empty", 1);
  ++line_number;
  if (Split(line, sep) != columns) {
    throw ParseError("results header does not match the schema", 1, "header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fields = Split(line, sep);
    if (fields.size() != columns.size()) {
      throw ParseError("results line " + std::to_string(line_number) +
                           " has " + std::to_string(fields.size()) +
                           " fields, expected " +
                           std::to_string(columns.size()),
                       line_number);
    }
    auto fail = [&](std::size_t c) {
      throw ParseError("results line " + std::to_string(line_number) +
                           ": bad " + columns[c] + " '" + fields[c] + "'",
                       line_number, columns[c]);
    };
    auto real = [&](std::size_t c) {
      double value = 0.0;
      if (!ParseNumber(fields[c], value)) fail(c);
      return value;
    };
    MetricsRow row;
    try {
      row.variant = ParseVariant(fields[0]);
    } catch (const ArgumentError&) {
      fail(0);
    }
    try {
      row.swept_parameter = ParseSweepParameter(fields[1]);
    } catch (const ArgumentError&) {
      fail(1);
    }
    row.swept_value = real(2);
    row.expected_revenue = real(3);
    row.satisfaction = real(4);
    row.running_time_s = fields[5] == kMasked ? kNan : real(5);
    if (!ParseNumber(fields[6], row.trials) || row.trials < 0) fail(6);
    if (!ParseNumber(fields[7], row.seed)) fail(7);
    rows.push_back(row);
  }
  return rows;
}

json ResultsMetadata(const SweepSpec& spec, const EmitOptions& options) {
  const GeneratorParams& g = spec.generator;
  auto range = [](const Range& r) { return json::array({r.lo, r.hi}); };
  json variants = json::array();
  for (Variant v : spec.variants) variants.push_back(VariantName(v));
  json meta;
  meta["format"] = kResultsFormatName;
  meta["version"] = kResultsFormatVersion;
  meta["code_version"] = CodeVersion();
  meta["columns"] = ResultsColumns();
  meta["separator"] = options.format == ResultsFormat::kCsv ? "," : "\t";
  meta["timing_masked"] = options.mask_timing;
  meta["spec"] = {
      {"swept_parameter", SweepParameterName(spec.parameter)},
      {"values", spec.values},
      {"trials", spec.trials},
      {"seed", spec.seed},
      {"variants", variants},
      {"epsilon", spec.epsilon},
      {"granularity", spec.granularity},
      {"max_scored_vectors", spec.max_scored_vectors},
      {"generator",
       {{"m", g.m},
        {"n", g.n},
        {"k", g.k},
        {"region_side", g.region_side},
        {"d_range", range(g.d_range)},
        {"h_range", range(g.h_range)},
        {"c_range", range(g.c_range)},
        {"dm_range", range(g.dm_range)},
        {"bid_noise", range(g.bid_noise)}}},
  };
  meta["estimators"] = {
      {"dpam", "exact expectation over the full price distribution"},
      {"dtam", "realized value (deterministic)"},
      {"dpam_s",
       "exact expectation over the last-level distribution given the "
       "sampled earlier prices"},
      {"dtam_s", "realized value (deterministic)"},
  };
  meta["seed_derivation"] =
      "trial t: T = DeriveSeed(seed, t); scenario seed DeriveSeed(T, 0); "
      "mechanism seed DeriveSeed(T, 1); DeriveSeed(b, i) = "
      "SplitMix64(b + 0x9E3779B97F4A7C15 * (i + 1))";
  meta["running_time"] =
      "mean wall-clock seconds of the mechanism run per trial, scenario "
      "generation excluded";
  meta["skipped_rows"] = "nan metrics and trials = 0";
  return meta;
}

void EmitResults(const std::vector<MetricsRow>& rows, const SweepSpec& spec,
                 const std::filesystem::path& path,
                 const EmitOptions& options) {
  if (rows.empty()) throw ArgumentError("no result rows to write");
  auto write = [](const std::filesystem::path& target,
                  const std::string& content) {
    std::ofstream out(target, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + target.string());
    out << content;
    if (!out) throw std::runtime_error("error writing " + target.string());
  };
  write(path, FormatResults(rows, options));
  std::filesystem::path meta_path = path;
  meta_path += ".meta.json";
  write(meta_path, ResultsMetadata(spec, options).dump(2) + "\n");
}

std::string CodeVersion() { return DPAUCTION_VERSION; }

}  // namespace dpauction
