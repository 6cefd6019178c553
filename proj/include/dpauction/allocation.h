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

// Winning-candidate determination and greedy assignment at a given price.
//
// For a price prefix p_1..p_l (l = k for the joint mechanisms):
//   1. A buyer is a candidate when sum_{z<=l} p_z d_i^z <= its effective bid.
//   2. Candidates are visited by decreasing total demand over all k types,
//      ties by ascending buyer id.
//   3. Each candidate goes to the nearest seller (ties by ascending seller
//      id) that still has d_i^z units of every type z <= l, is within the
//      buyer's maximum distance, and earns sum_{z<=l} (p_z - a_j^z) d_i^z >= 0.
// Remaining supply starts from the full supply for every scored price.

#ifndef DPAUCTION_ALLOCATION_H_
#define DPAUCTION_ALLOCATION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dpauction/market.h"

namespace dpauction {

enum class PricingMode {
  // Whole price vector at once; effective bid is the reported bid.
  kJoint,
  // Price prefix of length l; effective bid is the average unit bid times
  // the prefix demand, b_i / sum_{z<=k} d_i^z * sum_{z<=l} d_i^z.
  kSequential,
};

struct ScoredPrice {
  PriceVector price;  // full vector, or the prefix in sequential mode
  Allocation allocation;
  double revenue = 0.0;
};

// Effective bid of every buyer for a prefix of length `level`. For
// level == k both modes return the reported bids unchanged. Throws
// ArgumentError in sequential mode when a buyer's total demand is zero.
std::vector<double> EffectiveBids(const Scenario& scenario, int level,
                                  PricingMode mode);

std::vector<int> WinningBuyerCandidates(const Scenario& scenario,
                                        const PriceVector& price_prefix,
                                        std::span<const double> effective_bids);

// `candidates` must be ordered as returned by WinningBuyerCandidates.
Allocation Assign(const Scenario& scenario, const PriceVector& price_prefix,
                  std::span<const int> candidates);

// Candidates + assignment + (partial) revenue. In joint mode the prefix must
// have k entries.
ScoredPrice ScorePrice(const Scenario& scenario,
                       const PriceVector& price_prefix, PricingMode mode);

// Precomputed form of ScorePrice for scoring many prices of one scenario.
// Buyers are pre-sorted by demand and every buyer's in-range sellers are
// pre-sorted by distance, so one evaluation is a filter plus a first-fit
// scan. Produces exactly the allocation and revenue of ScorePrice.
//
// Not thread-safe: Score reuses an internal supply buffer. Use one engine per
// thread.
class ScoringEngine {
 public:
  explicit ScoringEngine(const Scenario& scenario);

  struct Result {
    double revenue = 0.0;
    int winners = 0;
  };

  // `effective_bids` as from EffectiveBids for the prefix's length.
  // Writes the allocation into `allocation` when non-null.
  Result Score(const PriceVector& price_prefix,
               std::span<const double> effective_bids,
               Allocation* allocation = nullptr);

  const Scenario& scenario() const { return scenario_; }
  std::size_t evaluations() const { return evaluations_; }

 private:
  const Scenario& scenario_;
  std::vector<int> demand_order_;
  std::vector<std::vector<int>> sellers_by_distance_;
  std::vector<double> remaining_;  // n x k, row-major
  std::vector<int> assigned_;
  std::size_t evaluations_ = 0;
};

}  // namespace dpauction

#endif  // DPAUCTION_ALLOCATION_H_
