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

// Brute-force references for small markets.
//
// OPT is the best platform revenue over every feasible assignment and every
// grid price vector. Feasible means: at most one seller per buyer, per-type
// capacity, maximum distance, and every winning buyer can afford the clearing
// price (sum_z p_z d_i^z <= b_i). OPT* is the best revenue the greedy
// pipeline reaches over the grid. Then F(Theta) * OPT <= OPT* <= OPT with
// F(Theta) = OPT* / ((c_max - c_min) n k h_max).

#ifndef DPAUCTION_ORACLE_H_
#define DPAUCTION_ORACLE_H_

#include <cstdint>

#include "dpauction/market.h"
#include "dpauction/mechanisms.h"
#include "dpauction/price_grid.h"

namespace dpauction {

inline constexpr int kOracleMaxBuyers = 6;
inline constexpr int kOracleMaxSellers = 3;
inline constexpr uint64_t kOracleMaxPriceVectors = 10'000;

struct OracleResult {
  double opt = 0.0;
  double opt_star = 0.0;
  double f_theta = 0.0;
  double bound_dpam = 0.0;
  double bound_dpam_s = 0.0;
};

// Throws CapacityError beyond kOracleMaxBuyers buyers, kOracleMaxSellers
// sellers or kOracleMaxPriceVectors grid vectors.
double BruteForceOpt(const Scenario& scenario, const PriceGrid& grid);

// max over grid^k of the greedy revenue.
double OptStar(const Scenario& scenario, const PriceGrid& grid);

// OPT* / ((c_max - c_min) n k h_max), h_max being the scenario's configured
// supply bound. Throws ArgumentError when the denominator is zero.
double FTheta(const Scenario& scenario, double opt_star);

// Closed-form lower bound on the expected revenue,
//   F * OPT - (6 c dR / epsilon) ln(e + epsilon OPT |S| / (2 dR)),
// with c = 1, |S| = levels^k for the joint mechanisms and c = k,
// |S| = levels for the sequential ones. dR is the full sensitivity. Returns 0
// for an empty market (dR = 0).
double RevenueBound(const Scenario& scenario, const MechanismConfig& config,
                    double opt, double opt_star);
// Computes OPT* by scoring the grid.
double RevenueBound(const Scenario& scenario, const MechanismConfig& config,
                    double opt);

// All of the above; config.variant is ignored.
OracleResult EvaluateOracle(const Scenario& scenario,
                            const MechanismConfig& config);

}  // namespace dpauction

#endif  // DPAUCTION_ORACLE_H_
