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

// Parameter sweeps and the results file format.
//
// A sweep varies one parameter (granularity, k, m or epsilon) over a list of
// values. Each (value, trial) pair draws one scenario, and every requested
// variant runs on that same scenario. Seeds, for base seed S and trial t:
//   trial seed     T = DeriveSeed(S, t)
//   scenario seed      DeriveSeed(T, 0)
//   mechanism seed     DeriveSeed(T, 1)
// The scenario seed does not depend on the swept value, so every column of a
// sweep sees the same random draws.
//
// Estimators per trial:
//   dpam    exact E[R] and E[winners] / m over the full price law
//   dpam_s  exact last-level expectation given the sampled earlier prices
//   dtam, dtam_s  realized revenue and satisfaction (deterministic)
// Running time is the wall-clock time of the mechanism run (scoring,
// distribution, selection and final allocation), scenario generation
// excluded.
//
// Results file: a header line and one row per (variant, value), rows ordered
// by variant (as requested) then value, columns
//   variant swept_parameter swept_value expected_revenue satisfaction
//   running_time_s trials seed
// separated by ',' (csv) or '\t' (tsv). Reals use the shortest decimal form
// that reads back to the same double. A row skipped because the joint grid
// exceeds the scoring cap has nan metrics and trials = 0. With timing masked
// the running_time_s field reads "masked", which makes the file a pure
// function of the spec.

#ifndef DPAUCTION_EXPERIMENTS_H_
#define DPAUCTION_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpauction/mechanisms.h"
#include "dpauction/scenario.h"

namespace dpauction {

enum class SweepParameter { kGranularity, kK, kM, kEpsilon };

std::string SweepParameterName(SweepParameter parameter);
// Throws ArgumentError for an unknown name.
SweepParameter ParseSweepParameter(const std::string& name);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kGranularity;
  std::vector<double> values;
  // m, n, k and ranges; `generator.seed` is ignored (see seeds above).
  GeneratorParams generator;
  double epsilon = 200.0;
  double granularity = 0.1;
  int trials = 500;
  std::vector<Variant> variants = {Variant::kDpam, Variant::kDtam,
                                   Variant::kDpamS, Variant::kDtamS};
  uint64_t seed = 0;
  uint64_t max_scored_vectors = kDefaultMaxScoredVectors;
};

// Throws ArgumentError on an empty value list, trials < 1, no variants, or a
// value that is invalid for its parameter (non-integer k or m, ...).
void CheckSweepSpec(const SweepSpec& spec);

// Generator parameters and mechanism config of one sweep cell.
GeneratorParams CellGenerator(const SweepSpec& spec, double value,
                              int trial);
MechanismConfig CellConfig(const SweepSpec& spec, double value, Variant variant,
                           int trial);

struct TrialMetrics {
  double revenue = 0.0;
  double satisfaction = 0.0;
  double seconds = 0.0;
};

// One variant on one scenario with the estimators above.
TrialMetrics RunTrial(const Scenario& scenario, const MechanismConfig& config);

struct MetricsRow {
  Variant variant = Variant::kDpam;
  SweepParameter swept_parameter = SweepParameter::kGranularity;
  double swept_value = 0.0;
  double expected_revenue = 0.0;
  double satisfaction = 0.0;
  double running_time_s = 0.0;
  int trials = 0;
  uint64_t seed = 0;

  bool skipped() const { return trials == 0; }
  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

// Means over trials. A CapacityError marks that row skipped instead of
// aborting.
std::vector<MetricsRow> RunSweep(const SweepSpec& spec);

enum class ResultsFormat { kCsv, kTsv };
// "csv" or "tsv"; throws ArgumentError otherwise.
ResultsFormat ParseResultsFormat(const std::string& name);

inline constexpr char kResultsFormatName[] = "dpauction.results";
inline constexpr int kResultsFormatVersion = 1;

struct EmitOptions {
  ResultsFormat format = ResultsFormat::kCsv;
  bool mask_timing = false;
};

std::vector<std::string> ResultsColumns();
std::string FormatResults(const std::vector<MetricsRow>& rows,
                          const EmitOptions& options);
// Throws ParseError (with line and column name) on malformed input. A masked
// timing field reads back as nan.
std::vector<MetricsRow> ParseResults(const std::string& text,
                                     ResultsFormat format);

// Spec echo, code version, estimators, seed derivation and column list.
nlohmann::json ResultsMetadata(const SweepSpec& spec,
                               const EmitOptions& options);

// Writes `path` and `path` + ".meta.json". Throws ArgumentError when rows is
// empty and std::runtime_error when a file cannot be written.
void EmitResults(const std::vector<MetricsRow>& rows, const SweepSpec& spec,
                 const std::filesystem::path& path,
                 const EmitOptions& options);

// Code version string compiled into the library.
std::string CodeVersion();

}  // namespace dpauction

#endif  // DPAUCTION_EXPERIMENTS_H_
