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

// Executable checks of the mechanisms' guarantees. All checks work on exact
// price distributions; nothing is estimated by sampling.
//
// Every audit returns an AuditReport. `max_statistic` is the largest value of
// the audited quantity (log-probability gap, utility gain, ...), `bound` the
// value it must not exceed and `tolerance` the numerical slack allowed on top.
// `max_violation` is the largest max(0, statistic - bound - tolerance) over
// all instances, so a clean audit reports exactly 0.

#ifndef DPAUCTION_AUDIT_H_
#define DPAUCTION_AUDIT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpauction/market.h"
#include "dpauction/mechanisms.h"

namespace dpauction {

struct AuditReport {
  std::string check_name;
  int instances_tested = 0;
  double max_statistic = 0.0;
  double bound = 0.0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  // Serialized scenario plus a description of the worst instance.
  std::string worst_case;

  bool passed() const { return max_violation == 0.0; }
  // Folds `other` into this report, keeping the worse worst case.
  void Merge(const AuditReport& other);
  std::string Summary() const;
};

// Largest |ln Pr[p] - ln Pr'[p]| over a common support. Points with
// probability zero under exactly one law give +inf.
double MaxLogGap(const PriceDistribution& a, const PriceDistribution& b);

// Per-level gaps of the sequential mechanism: entry l - 1 is the largest gap
// between the level-l laws of `a` and `b` over every prefix in grid^(l-1).
std::vector<double> SequentialLevelGaps(const Scenario& a, const Scenario& b,
                                        const MechanismConfig& config);

struct Neighbor {
  Scenario scenario;
  std::string change;
};

// `num_neighbors` neighbors of `scenario`; the even-indexed ones redraw one
// buyer's bid uniformly in [v_min, v_max], the odd-indexed ones one seller's
// whole ask vector in [c_min, c_max]^k. Falls back to the other kind when a
// side is empty.
std::vector<Neighbor> MakeNeighbors(const Scenario& scenario,
                                    int num_neighbors, uint64_t seed);

// Exact epsilon-DP audit of config.variant (kDpam or kDpamS). For kDpam the
// statistic is the joint log gap, with bound epsilon and tolerance 1e-6. For
// kDpamS it is the larger of the summed per-level gaps and the joint-law gap,
// with tolerance k * 1e-6.
AuditReport AuditDp(const Scenario& scenario, const MechanismConfig& config,
                    int num_neighbors, uint64_t seed);

struct DeviationGrid {
  // Deviating bid = multiple * valuation.
  std::vector<double> bid_multiples;
  // Every ask component moves by the same shift, then is clamped to
  // [c_min, c_max], so each deviation is monotone across components.
  std::vector<double> ask_shifts;
};

// Nine bid multiples around 1 and shifts of +-0.05, +-0.1, +-0.2.
DeviationGrid DefaultDeviationGrid();

// Utility gains of every unilateral deviation at a fixed full price vector.
// Tolerance 1e-9.
AuditReport AuditTruthfulnessFixedPrice(const Scenario& scenario,
                                        const PriceVector& price,
                                        const DeviationGrid& deviations);

// Exact expected utility of every player under config.variant (kDpam or
// kDpamS), from the mechanism's full price law.
struct ExpectedUtilities {
  std::vector<double> buyers;
  std::vector<double> sellers;
};
ExpectedUtilities ComputeExpectedUtilities(const Scenario& scenario,
                                           const MechanismConfig& config);

// max{epsilon v_max, epsilon (c_max - c_min) k h_max}.
double GammaBound(const Scenario& scenario, double epsilon);

// Expected gain of every unilateral deviation against GammaBound, tolerance
// 1e-9.
AuditReport AuditTruthfulnessExpected(const Scenario& scenario,
                                      const MechanismConfig& config,
                                      const DeviationGrid& deviations);

// Runs all four variants on every scenario (truthful reports required;
// ArgumentError otherwise) with per-scenario seeds derived from config.seed.
// The statistic is the largest negative utility or revenue, or constraint
// slack of an emitted allocation; bound 0, tolerance 1e-9.
AuditReport AuditIrBudget(std::span<const Scenario> scenarios,
                          const MechanismConfig& config);

}  // namespace dpauction

#endif  // DPAUCTION_AUDIT_H_
