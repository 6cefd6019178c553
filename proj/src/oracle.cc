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

#include "dpauction/oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dpauction/errors.h"

namespace dpauction {

namespace {

// Depth-first search over "buyer i -> seller j or nobody" at a fixed price.
class AssignmentSearch {
 public:
  AssignmentSearch(const Scenario& scenario, const PriceVector& price)
      : scenario_(scenario), price_(price), affordable_(scenario.num_buyers()) {
    for (const Seller& seller : scenario.sellers) {
      remaining_.push_back(seller.supply);
    }
    for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
      const Buyer& buyer = scenario.buyers[i];
      double payment = 0.0;
      for (int z = 0; z < scenario.k; ++z) {
        payment += price[z] * buyer.demand[z];
      }
      affordable_[i] = payment <= buyer.bid;
    }
  }

  double Run() {
    best_ = 0.0;  // the empty assignment
    Visit(0, 0.0);
    return best_;
  }

 private:
  void Visit(std::size_t i, double revenue) {
    if (i == scenario_.num_buyers()) {
      best_ = std::max(best_, revenue);
      return;
    }
    Visit(i + 1, revenue);
    if (!affordable_[i]) return;
    const Buyer& buyer = scenario_.buyers[i];
    for (std::size_t j = 0; j < scenario_.num_sellers(); ++j) {
      if (scenario_.distances[i][j] > buyer.max_distance) continue;
      auto& rest = remaining_[j];
      bool fits = true;
      for (int z = 0; z < scenario_.k; ++z) {
        if (rest[z] < buyer.demand[z]) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      double gain = 0.0;
      for (int z = 0; z < scenario_.k; ++z) {
        gain += (price_[z] - scenario_.sellers[j].ask[z]) * buyer.demand[z];
        rest[z] -= buyer.demand[z];
      }
      Visit(i + 1, revenue + gain);
      for (int z = 0; z < scenario_.k; ++z) rest[z] += buyer.demand[z];
    }
  }

  const Scenario& scenario_;
  const PriceVector& price_;
  std::vector<bool> affordable_;
  std::vector<ResourceVector> remaining_;
  double best_ = 0.0;
};

}  // namespace

double BruteForceOpt(const Scenario& scenario, const PriceGrid& grid) {
  if (scenario.num_buyers() > kOracleMaxBuyers ||
      scenario.num_sellers() > kOracleMaxSellers) {
    throw CapacityError("brute-force oracle is limited to " +
                        std::to_string(kOracleMaxBuyers) + " buyers and " +
                        std::to_string(kOracleMaxSellers) + " sellers");
  }
  const PriceProduct product(grid, scenario.k);
  if (product.size() > kOracleMaxPriceVectors) {
    throw CapacityError("brute-force oracle is limited to " +
                        std::to_string(kOracleMaxPriceVectors) +
                        " price vectors");
  }
  double best = 0.0;
  for (const PriceVector& price : product) {
    best = std::max(best, AssignmentSearch(scenario, price).Run());
  }
  return best;
}

double OptStar(const Scenario& scenario, const PriceGrid& grid) {
  const GridScores scores = ScoreGrid(scenario, grid);
  return *std::max_element(scores.revenues.begin(), scores.revenues.end());
}

double FTheta(const Scenario& scenario, double opt_star) {
  const double denominator = (scenario.bounds.c_max - scenario.bounds.c_min) *
                             static_cast<double>(scenario.num_sellers()) *
                             scenario.k * scenario.bounds.h_max;
  if (!(denominator > 0.0)) {
    throw ArgumentError("F(Theta) denominator (c_max - c_min) n k h_max is 0");
  }
  return opt_star / denominator;
}

double RevenueBound(const Scenario& scenario, const MechanismConfig& config,
                    double opt, double opt_star) {
  if (!(config.epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
  const double sensitivity = SensitivityFull(scenario);
  if (sensitivity == 0.0) return 0.0;
  const bool sequential = IsSequential(config.variant);
  const double outcomes =
      sequential ? static_cast<double>(config.grid.levels())
                 : static_cast<double>(ProductSize(config.grid, scenario.k));
  const double factor = sequential ? scenario.k : 1.0;
  const double eps = config.epsilon;
  return FTheta(scenario, opt_star) * opt -
         6.0 * factor * sensitivity / eps *
             std::log(std::numbers::e +
                      eps * opt * outcomes / (2.0 * sensitivity));
}

double RevenueBound(const Scenario& scenario, const MechanismConfig& config,
                    double opt) {
  if (SensitivityFull(scenario) == 0.0) return 0.0;
  return RevenueBound(scenario, config, opt, OptStar(scenario, config.grid));
}

OracleResult EvaluateOracle(const Scenario& scenario,
                            const MechanismConfig& config) {
  OracleResult result;
  result.opt = BruteForceOpt(scenario, config.grid);
  result.opt_star = OptStar(scenario, config.grid);
  if (scenario.num_sellers() > 0) {
    result.f_theta = FTheta(scenario, result.opt_star);
  }
  MechanismConfig joint = config;
  joint.variant = Variant::kDpam;
  result.bound_dpam = RevenueBound(scenario, joint, result.opt,
                                   result.opt_star);
  MechanismConfig sequential = config;
  sequential.variant = Variant::kDpamS;
  result.bound_dpam_s = RevenueBound(scenario, sequential, result.opt,
                                     result.opt_star);
  return result;
}

}  // namespace dpauction
