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

// Market model of one auction round: IoT devices (buyers) bidding for resource
// bundles and edge nodes (sellers) offering capped per-type quantities.
//
// Buyers carry both the reported bid and the private valuation; sellers carry
// both the reported per-unit ask and the private per-unit cost. Mechanisms
// read only the reports. Utilities read the private fields.

#ifndef DPAUCTION_MARKET_H_
#define DPAUCTION_MARKET_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dpauction {

// Absolute tolerance of constraint checks.
inline constexpr double kConstraintTolerance = 1e-9;

// Units per resource type r_1..r_k.
using ResourceVector = std::vector<double>;

// Per-unit clearing price of each resource type. A price prefix (the first
// `level` entries) is used by the sequential mechanisms.
using PriceVector = std::vector<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Buyer {
  int id = 0;
  ResourceVector demand;
  double bid = 0.0;
  double valuation = 0.0;
  double max_distance = 0.0;
  std::optional<Point> position;

  friend bool operator==(const Buyer&, const Buyer&) = default;
};

struct Seller {
  int id = 0;
  ResourceVector supply;
  ResourceVector ask;
  ResourceVector cost;
  std::optional<Point> position;

  friend bool operator==(const Seller&, const Seller&) = default;
};

struct MarketBounds {
  double c_min = 0.0;
  double c_max = 1.0;
  double v_min = 0.0;
  double v_max = 1.0;
  double d_min = 0.0;
  double d_max = 1.0;
  double h_min = 0.0;
  double h_max = 1.0;

  friend bool operator==(const MarketBounds&, const MarketBounds&) = default;
};

struct Scenario {
  int k = 1;
  std::vector<Buyer> buyers;
  std::vector<Seller> sellers;
  // distances[i][j] between buyer i and seller j.
  std::vector<std::vector<double>> distances;
  MarketBounds bounds;

  std::size_t num_buyers() const { return buyers.size(); }
  std::size_t num_sellers() const { return sellers.size(); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Sparse encoding of the binary allocation matrix: assignment[i] is the seller
// serving buyer i, or empty when buyer i loses. At most one seller per buyer
// holds by construction.
struct Allocation {
  std::vector<std::optional<int>> assignment;

  static Allocation Empty(std::size_t num_buyers) {
    return Allocation{std::vector<std::optional<int>>(num_buyers)};
  }

  std::size_t NumAssigned() const;
  // Dense m x n 0/1 matrix.
  std::vector<std::vector<int>> ToMatrix(std::size_t num_sellers) const;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct AuctionOutcome {
  PriceVector price;
  Allocation allocation;
  std::vector<double> buyer_utilities;
  std::vector<double> seller_utilities;
  double revenue = 0.0;
};

// Sum of demand over the first `level` resource types (all when level < 0).
double TotalDemand(const Buyer& buyer, int level = -1);

// v_i - sum_z p_z d_i^z when buyer i wins, else 0.
double BuyerUtility(const Scenario& scenario, std::size_t buyer_index,
                    const Allocation& allocation, const PriceVector& price);

// sum_z (p_z - c_j^z) * (units of r_z sold by seller j). Uses the private cost.
double SellerUtility(const Scenario& scenario, std::size_t seller_index,
                     const Allocation& allocation, const PriceVector& price);

// Platform revenue scored with the reported asks, restricted to the first
// price.size() resource types. With a full-length price this is the revenue
// objective; with a prefix it is the partial revenue of the sequential
// mechanisms.
double PlatformRevenue(const Scenario& scenario, const Allocation& allocation,
                       const PriceVector& price);

// Utilities and revenue of `allocation` at `price`.
AuctionOutcome MakeOutcome(const Scenario& scenario, PriceVector price,
                           Allocation allocation);

enum class Constraint {
  kOneSellerPerBuyer,  // malformed assignment entry
  kSupplyCapacity,
  kMaxDistance,
};

std::string ConstraintName(Constraint c);

struct ConstraintViolation {
  Constraint constraint;
  int buyer = -1;     // -1 when not applicable
  int seller = -1;
  int resource = -1;
  double slack = 0.0;  // negative amount by which the constraint is missed

  std::string ToString() const;
};

// Empty iff the allocation respects one-seller-per-buyer, every seller's
// per-resource capacity, and every buyer's maximum distance.
std::vector<ConstraintViolation> ValidateAllocation(
    const Scenario& scenario, const Allocation& allocation);

// Structural and bound checks of a scenario; empty when valid.
std::vector<std::string> ValidateScenario(const Scenario& scenario);

// Throws ArgumentError listing the first problem when invalid.
void CheckScenario(const Scenario& scenario);

}  // namespace dpauction

#endif  // DPAUCTION_MARKET_H_
