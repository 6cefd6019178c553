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

#include "dpauction/market.h"

#include <cmath>
#include <sstream>

#include "dpauction/errors.h"

namespace dpauction {

namespace {

bool Within(double value, double lo, double hi) {
  return value >= lo - kConstraintTolerance &&
         value <= hi + kConstraintTolerance;
}

void CheckPriceLength(const Scenario& scenario, const PriceVector& price) {
  if (static_cast<int>(price.size()) != scenario.k) {
    throw ArgumentError("price vector has " + std::to_string(price.size()) +
                        " entries, expected k=" + std::to_string(scenario.k));
  }
}

void CheckAllocationShape(const Scenario& scenario,
                          const Allocation& allocation) {
  if (allocation.assignment.size() != scenario.num_buyers()) {
    throw ArgumentError("allocation covers " +
                        std::to_string(allocation.assignment.size()) +
                        " buyers, scenario has " +
                        std::to_string(scenario.num_buyers()));
  }
}

}  // namespace

std::size_t Allocation::NumAssigned() const {
  std::size_t count = 0;
  for (const auto& seller : assignment) {
    if (seller.has_value()) ++count;
  }
  return count;
}

std::vector<std::vector<int>> Allocation::ToMatrix(
    std::size_t num_sellers) const {
  std::vector<std::vector<int>> matrix(assignment.size(),
                                       std::vector<int>(num_sellers, 0));
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i].has_value() && *assignment[i] >= 0 &&
        static_cast<std::size_t>(*assignment[i]) < num_sellers) {
      matrix[i][*assignment[i]] = 1;
    }
  }
  return matrix;
}

double TotalDemand(const Buyer& buyer, int level) {
  const std::size_t end = level < 0 ? buyer.demand.size()
                                    : static_cast<std::size_t>(level);
  double total = 0.0;
  for (std::size_t z = 0; z < end && z < buyer.demand.size(); ++z) {
    total += buyer.demand[z];
  }
  return total;
}

double BuyerUtility(const Scenario& scenario, std::size_t buyer_index,
                    const Allocation& allocation, const PriceVector& price) {
  if (buyer_index >= scenario.num_buyers()) {
    throw ArgumentError("buyer index " + std::to_string(buyer_index) +
                        " out of range");
  }
  CheckAllocationShape(scenario, allocation);
  CheckPriceLength(scenario, price);
  if (!allocation.assignment[buyer_index].has_value()) return 0.0;
  const Buyer& buyer = scenario.buyers[buyer_index];
  double payment = 0.0;
  for (int z = 0; z < scenario.k; ++z) payment += price[z] * buyer.demand[z];
  return buyer.valuation - payment;
}

double SellerUtility(const Scenario& scenario, std::size_t seller_index,
                     const Allocation& allocation, const PriceVector& price) {
  if (seller_index >= scenario.num_sellers()) {
    throw ArgumentError("seller index " + std::to_string(seller_index) +
                        " out of range");
  }
  CheckAllocationShape(scenario, allocation);
  CheckPriceLength(scenario, price);
  const Seller& seller = scenario.sellers[seller_index];
  double utility = 0.0;
  for (int z = 0; z < scenario.k; ++z) {
    double sold = 0.0;
    for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
      if (allocation.assignment[i] == static_cast<int>(seller_index)) {
        sold += scenario.buyers[i].demand[z];
      }
    }
    utility += (price[z] - seller.cost[z]) * sold;
  }
  return utility;
}

double PlatformRevenue(const Scenario& scenario, const Allocation& allocation,
                       const PriceVector& price) {
  CheckAllocationShape(scenario, allocation);
  if (price.empty() || static_cast<int>(price.size()) > scenario.k) {
    throw ArgumentError("price prefix length must be in [1, k]");
  }
  const std::size_t level = price.size();
  double revenue = 0.0;
  for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
    if (!allocation.assignment[i].has_value()) continue;
    const Seller& seller = scenario.sellers.at(*allocation.assignment[i]);
    const Buyer& buyer = scenario.buyers[i];
    for (std::size_t z = 0; z < level; ++z) {
      revenue += (price[z] - seller.ask[z]) * buyer.demand[z];
    }
  }
  return revenue;
}

AuctionOutcome MakeOutcome(const Scenario& scenario, PriceVector price,
                           Allocation allocation) {
  AuctionOutcome outcome;
  outcome.buyer_utilities.resize(scenario.num_buyers());
  outcome.seller_utilities.resize(scenario.num_sellers());
  for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
    outcome.buyer_utilities[i] = BuyerUtility(scenario, i, allocation, price);
  }
  for (std::size_t j = 0; j < scenario.num_sellers(); ++j) {
    outcome.seller_utilities[j] =
        SellerUtility(scenario, j, allocation, price);
  }
  outcome.revenue = PlatformRevenue(scenario, allocation, price);
  outcome.price = std::move(price);
  outcome.allocation = std::move(allocation);
  return outcome;
}

std::string ConstraintName(Constraint c) {
  switch (c) {
    case Constraint::kOneSellerPerBuyer:
      return "one_seller_per_buyer";
    case Constraint::kSupplyCapacity:
      return "supply_capacity";
    case Constraint::kMaxDistance:
      return "max_distance";
  }
  return "unknown";
}

std::string ConstraintViolation::ToString() const {
  std::ostringstream out;
  out << ConstraintName(constraint);
  if (buyer >= 0) out << " buyer=" << buyer;
  if (seller >= 0) out << " seller=" << seller;
  if (resource >= 0) out << " resource=" << resource;
  out << " slack=" << slack;
  return out.str();
}

std::vector<ConstraintViolation> ValidateAllocation(
    const Scenario& scenario, const Allocation& allocation) {
  std::vector<ConstraintViolation> violations;
  const std::size_t m = scenario.num_buyers();
  const std::size_t n = scenario.num_sellers();
  if (allocation.assignment.size() != m) {
    violations.push_back({Constraint::kOneSellerPerBuyer, -1, -1, -1,
                          -std::abs(static_cast<double>(
                              allocation.assignment.size()) -
                                    static_cast<double>(m))});
    return violations;
  }

  std::vector<std::vector<double>> used(n, std::vector<double>(scenario.k));
  for (std::size_t i = 0; i < m; ++i) {
    if (!allocation.assignment[i].has_value()) continue;
    const int j = *allocation.assignment[i];
    if (j < 0 || static_cast<std::size_t>(j) >= n) {
      violations.push_back(
          {Constraint::kOneSellerPerBuyer, static_cast<int>(i), j, -1, -1.0});
      continue;
    }
    for (int z = 0; z < scenario.k; ++z) {
      used[j][z] += scenario.buyers[i].demand[z];
    }
    const double distance_slack =
        scenario.buyers[i].max_distance - scenario.distances[i][j];
    if (distance_slack < -kConstraintTolerance) {
      violations.push_back({Constraint::kMaxDistance, static_cast<int>(i), j,
                            -1, distance_slack});
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (int z = 0; z < scenario.k; ++z) {
      const double slack = scenario.sellers[j].supply[z] - used[j][z];
      if (slack < -kConstraintTolerance) {
        violations.push_back({Constraint::kSupplyCapacity, -1,
                              static_cast<int>(j), z, slack});
      }
    }
  }
  return violations;
}

std::vector<std::string> ValidateScenario(const Scenario& scenario) {
  std::vector<std::string> problems;
  const auto& b = scenario.bounds;
  auto add = [&problems](std::string message) {
    problems.push_back(std::move(message));
  };

  if (scenario.k < 1) {
    add("k must be >= 1");
    return problems;
  }
  if (b.c_min > b.c_max || b.v_min > b.v_max || b.d_min > b.d_max ||
      b.h_min > b.h_max) {
    add("bounds must satisfy min <= max");
  }
  const auto k = static_cast<std::size_t>(scenario.k);

  for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
    const Buyer& buyer = scenario.buyers[i];
    const std::string who = "buyer " + std::to_string(i);
    if (buyer.id != static_cast<int>(i)) add(who + ": id must equal index");
    if (buyer.demand.size() != k) {
      add(who + ": demand must have k entries");
      continue;
    }
    for (double d : buyer.demand) {
      if (d < 0.0 || !Within(d, b.d_min, b.d_max)) {
        add(who + ": demand outside [d_min, d_max]");
        break;
      }
    }
    if (!Within(buyer.bid, b.v_min, b.v_max)) {
      add(who + ": bid outside [v_min, v_max]");
    }
    if (!Within(buyer.valuation, b.v_min, b.v_max)) {
      add(who + ": valuation outside [v_min, v_max]");
    }
    if (!(buyer.max_distance > 0.0)) add(who + ": max_distance must be > 0");
  }

  for (std::size_t j = 0; j < scenario.num_sellers(); ++j) {
    const Seller& seller = scenario.sellers[j];
    const std::string who = "seller " + std::to_string(j);
    if (seller.id != static_cast<int>(j)) add(who + ": id must equal index");
    if (seller.supply.size() != k || seller.ask.size() != k ||
        seller.cost.size() != k) {
      add(who + ": supply, ask and cost must have k entries");
      continue;
    }
    for (std::size_t z = 0; z < k; ++z) {
      if (seller.supply[z] < 0.0 ||
          !Within(seller.supply[z], b.h_min, b.h_max)) {
        add(who + ": supply outside [h_min, h_max]");
        break;
      }
    }
    for (std::size_t z = 0; z < k; ++z) {
      if (!Within(seller.ask[z], b.c_min, b.c_max) ||
          !Within(seller.cost[z], b.c_min, b.c_max)) {
        add(who + ": ask/cost outside [c_min, c_max]");
        break;
      }
    }
  }

  if (scenario.distances.size() != scenario.num_buyers()) {
    add("distances must have one row per buyer");
    return problems;
  }
  for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
    const auto& row = scenario.distances[i];
    if (row.size() != scenario.num_sellers()) {
      add("distances row " + std::to_string(i) +
          " must have one entry per seller");
      continue;
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!(row[j] >= 0.0)) {
        add("distance (" + std::to_string(i) + "," + std::to_string(j) +
            ") must be >= 0");
        continue;
      }
      const auto& pb = scenario.buyers[i].position;
      const auto& ps = scenario.sellers[j].position;
      if (pb.has_value() && ps.has_value()) {
        const double euclid = std::hypot(pb->x - ps->x, pb->y - ps->y);
        if (std::abs(euclid - row[j]) > 1e-9) {
          add("distance (" + std::to_string(i) + "," + std::to_string(j) +
              ") disagrees with positions");
        }
      }
    }
  }
  return problems;
}

void CheckScenario(const Scenario& scenario) {
  const auto problems = ValidateScenario(scenario);
  if (!problems.empty()) {
    throw ArgumentError("invalid scenario: " + problems.front());
  }
}

}  // namespace dpauction
