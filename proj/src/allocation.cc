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

#include "dpauction/allocation.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "dpauction/errors.h"

namespace dpauction {

namespace {

void CheckPrefix(const Scenario& scenario, const PriceVector& price_prefix) {
  if (price_prefix.empty() ||
      static_cast<int>(price_prefix.size()) > scenario.k) {
    throw ArgumentError("price prefix length must be in [1, k]");
  }
}

double Payment(const Buyer& buyer, const PriceVector& price_prefix) {
  double payment = 0.0;
  for (std::size_t z = 0; z < price_prefix.size(); ++z) {
    payment += price_prefix[z] * buyer.demand[z];
  }
  return payment;
}

double Margin(const Buyer& buyer, const Seller& seller,
              const PriceVector& price_prefix) {
  double margin = 0.0;
  for (std::size_t z = 0; z < price_prefix.size(); ++z) {
    margin += (price_prefix[z] - seller.ask[z]) * buyer.demand[z];
  }
  return margin;
}

// Buyer indices by decreasing total demand, ties by ascending id.
bool DemandBefore(const Scenario& scenario, int a, int b) {
  const double da = TotalDemand(scenario.buyers[a]);
  const double db = TotalDemand(scenario.buyers[b]);
  if (da != db) return da > db;
  return a < b;
}

}  // namespace

std::vector<double> EffectiveBids(const Scenario& scenario, int level,
                                  PricingMode mode) {
  if (level < 1 || level > scenario.k) {
    throw ArgumentError("level must be in [1, k]");
  }
  std::vector<double> bids(scenario.num_buyers());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const Buyer& buyer = scenario.buyers[i];
    if (mode == PricingMode::kJoint) {
      bids[i] = buyer.bid;
      continue;
    }
    const double total = TotalDemand(buyer);
    if (!(total > 0.0)) {
      throw ArgumentError("buyer " + std::to_string(i) +
                          " has zero total demand; average unit bid is "
                          "undefined");
    }
    // At the last level the prefix is the whole bundle and the effective bid
    // is the reported bid itself.
    bids[i] = level == scenario.k
                  ? buyer.bid
                  : buyer.bid / total * TotalDemand(buyer, level);
  }
  return bids;
}

std::vector<int> WinningBuyerCandidates(
    const Scenario& scenario, const PriceVector& price_prefix,
    std::span<const double> effective_bids) {
  CheckPrefix(scenario, price_prefix);
  if (effective_bids.size() != scenario.num_buyers()) {
    throw ArgumentError("one effective bid per buyer is required");
  }
  std::vector<int> candidates;
  for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
    if (Payment(scenario.buyers[i], price_prefix) <= effective_bids[i]) {
      candidates.push_back(static_cast<int>(i));
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return DemandBefore(scenario, a, b);
  });
  return candidates;
}

Allocation Assign(const Scenario& scenario, const PriceVector& price_prefix,
                  std::span<const int> candidates) {
  CheckPrefix(scenario, price_prefix);
  const std::size_t level = price_prefix.size();
  std::vector<ResourceVector> remaining;
  remaining.reserve(scenario.num_sellers());
  for (const Seller& seller : scenario.sellers) {
    remaining.push_back(seller.supply);
  }

  Allocation allocation = Allocation::Empty(scenario.num_buyers());
  for (int i : candidates) {
    const Buyer& buyer = scenario.buyers[i];
    int best = -1;
    for (std::size_t j = 0; j < scenario.num_sellers(); ++j) {
      bool enough = true;
      for (std::size_t z = 0; z < level; ++z) {
        if (remaining[j][z] < buyer.demand[z]) {
          enough = false;
          break;
        }
      }
      if (!enough) continue;
      if (scenario.distances[i][j] > buyer.max_distance) continue;
      if (Margin(buyer, scenario.sellers[j], price_prefix) < 0.0) continue;
      if (best < 0 || scenario.distances[i][j] < scenario.distances[i][best]) {
        best = static_cast<int>(j);
      }
    }
    if (best < 0) continue;
    for (std::size_t z = 0; z < level; ++z) {
      remaining[best][z] -= buyer.demand[z];
    }
    allocation.assignment[i] = best;
  }
  return allocation;
}

ScoredPrice ScorePrice(const Scenario& scenario,
                       const PriceVector& price_prefix, PricingMode mode) {
  CheckPrefix(scenario, price_prefix);
  if (mode == PricingMode::kJoint &&
      static_cast<int>(price_prefix.size()) != scenario.k) {
    throw ArgumentError("joint pricing needs a full price vector");
  }
  const int level = static_cast<int>(price_prefix.size());
  const auto bids = EffectiveBids(scenario, level, mode);
  const auto candidates = WinningBuyerCandidates(scenario, price_prefix, bids);
  ScoredPrice scored;
  scored.price = price_prefix;
  scored.allocation = Assign(scenario, price_prefix, candidates);
  scored.revenue = PlatformRevenue(scenario, scored.allocation, price_prefix);
  return scored;
}

ScoringEngine::ScoringEngine(const Scenario& scenario)
    : scenario_(scenario),
      demand_order_(scenario.num_buyers()),
      sellers_by_distance_(scenario.num_buyers()),
      remaining_(scenario.num_sellers() * scenario.k),
      assigned_(scenario.num_buyers(), -1) {
  std::iota(demand_order_.begin(), demand_order_.end(), 0);
  std::sort(demand_order_.begin(), demand_order_.end(), [&](int a, int b) {
    return DemandBefore(scenario, a, b);
  });
  for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
    auto& sellers = sellers_by_distance_[i];
    const auto& row = scenario.distances[i];
    for (std::size_t j = 0; j < scenario.num_sellers(); ++j) {
      if (row[j] <= scenario.buyers[i].max_distance) {
        sellers.push_back(static_cast<int>(j));
      }
    }
    std::stable_sort(sellers.begin(), sellers.end(),
                     [&row](int a, int b) { return row[a] < row[b]; });
  }
}

ScoringEngine::Result ScoringEngine::Score(
    const PriceVector& price_prefix, std::span<const double> effective_bids,
    Allocation* allocation) {
  CheckPrefix(scenario_, price_prefix);
  ++evaluations_;
  const std::size_t level = price_prefix.size();
  const std::size_t k = scenario_.k;
  for (std::size_t j = 0; j < scenario_.num_sellers(); ++j) {
    const auto& supply = scenario_.sellers[j].supply;
    std::copy(supply.begin(), supply.end(), remaining_.begin() + j * k);
  }
  std::fill(assigned_.begin(), assigned_.end(), -1);

  Result result;
  for (int i : demand_order_) {
    const Buyer& buyer = scenario_.buyers[i];
    if (Payment(buyer, price_prefix) > effective_bids[i]) continue;
    for (int j : sellers_by_distance_[i]) {
      double* rest = remaining_.data() + j * k;
      bool enough = true;
      for (std::size_t z = 0; z < level; ++z) {
        if (rest[z] < buyer.demand[z]) {
          enough = false;
          break;
        }
      }
      if (!enough) continue;
      if (Margin(buyer, scenario_.sellers[j], price_prefix) < 0.0) continue;
      for (std::size_t z = 0; z < level; ++z) rest[z] -= buyer.demand[z];
      assigned_[i] = j;
      ++result.winners;
      break;
    }
  }

  // Same summation order as PlatformRevenue.
  for (std::size_t i = 0; i < assigned_.size(); ++i) {
    if (assigned_[i] < 0) continue;
    const Seller& seller = scenario_.sellers[assigned_[i]];
    const Buyer& buyer = scenario_.buyers[i];
    for (std::size_t z = 0; z < level; ++z) {
      result.revenue += (price_prefix[z] - seller.ask[z]) * buyer.demand[z];
    }
  }
  if (allocation != nullptr) {
    *allocation = Allocation::Empty(scenario_.num_buyers());
    for (std::size_t i = 0; i < assigned_.size(); ++i) {
      if (assigned_[i] >= 0) allocation->assignment[i] = assigned_[i];
    }
  }
  return result;
}

}  // namespace dpauction
