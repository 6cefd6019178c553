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

// Random edge-market generation and the scenario file format.
//
// Generated markets place buyers and sellers uniformly in a square region.
// Demands, supplies, asks and maximum distances are uniform in their ranges;
// a buyer's bid is 0.5 * (total demand) * U(0.7, 1.3). Reports are truthful
// (valuation = bid, cost = ask) unless changed afterwards.
//
// Scenario files are JSON documents (see docs in README.md):
//   {"format": "dpauction.scenario", "version": 1, "k": ..., "bounds": {...},
//    "buyers": [...], "sellers": [...], "distances": [[...], ...]}
// Reals are written in shortest round-trip decimal form, so load(save(s))
// reproduces every double exactly.

#ifndef DPAUCTION_SCENARIO_H_
#define DPAUCTION_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "dpauction/market.h"

namespace dpauction {

inline constexpr int kScenarioFormatVersion = 1;
inline constexpr char kScenarioFormatName[] = "dpauction.scenario";

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct GeneratorParams {
  int m = 100;
  int n = 10;
  int k = 3;
  double region_side = 1000.0;
  Range d_range{1.0, 5.0};
  Range h_range{10.0, 20.0};
  Range c_range{0.0, 1.0};
  Range dm_range{200.0 * 1.4142135623730951, 1000.0 * 1.4142135623730951};
  Range bid_noise{0.7, 1.3};
  uint64_t seed = 0;
};

// Throws ArgumentError when a count is < 1 or a range is empty.
void CheckGeneratorParams(const GeneratorParams& params);

// Sellers and buyers come from two independent child streams of the seed,
// and each buyer consumes its draws in order, so scenarios with the same seed
// and different m share their first buyers and all sellers.
//
// Bounds: [c_min, c_max] = c_range, [d_min, d_max] = d_range,
// [h_min, h_max] = h_range, and [v_min, v_max] is the range the bid rule can
// produce: 0.5 k d_min noise_lo .. 0.5 k d_max noise_hi.
Scenario Generate(const GeneratorParams& params);

// A market small enough for the brute-force oracle: m in [1, 6], n in
// [1, 3], k in {1, 2}, other ranges at their defaults.
GeneratorParams OracleScaleParams(uint64_t seed);

nlohmann::json ScenarioToJson(const Scenario& scenario);
// Throws ParseError (with the JSON path in field()) or VersionError.
Scenario ScenarioFromJson(const nlohmann::json& document);

std::string SerializeScenario(const Scenario& scenario);
// Throws ParseError with the line of a syntax error, or VersionError.
Scenario ParseScenario(const std::string& text);

// Throws std::runtime_error on I/O failure.
void SaveScenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario LoadScenario(const std::filesystem::path& path);

}  // namespace dpauction

#endif  // DPAUCTION_SCENARIO_H_
