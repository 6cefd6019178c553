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

// The four pricing mechanisms.
//
//   kDpam   Scores every vector of grid^k and samples one with probability
//           proportional to exp(epsilon * R / (2 * dR)), where R is the
//           platform revenue and dR = sum_j (c_max - c_min) sum_z h_j^z.
//   kDtam   Same scores, deterministic argmax (lexicographically smallest
//           maximizer).
//   kDpamS  Fixes p_1, ..., p_k one at a time. Level l scores each p_l in
//           the grid with the earlier prices fixed, using partial revenue
//           over types 1..l, sensitivity dR^l over types 1..l, and budget
//           epsilon / k.
//   kDtamS  Sequential argmax.
//
// Sampling is inverse-CDF over the normalized probabilities with the Rng of
// random.h, so a (scenario, config) pair always yields the same outcome.

#ifndef DPAUCTION_MECHANISMS_H_
#define DPAUCTION_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpauction/allocation.h"
#include "dpauction/market.h"
#include "dpauction/price_grid.h"
#include "dpauction/random.h"

namespace dpauction {

enum class Variant { kDpam, kDtam, kDpamS, kDtamS };

std::string VariantName(Variant variant);
// Accepts "dpam", "dtam", "dpam_s", "dtam_s" (also with '-'); throws
// ArgumentError otherwise.
Variant ParseVariant(const std::string& name);
bool IsSequential(Variant variant);
bool IsPrivate(Variant variant);

inline constexpr uint64_t kDefaultMaxScoredVectors = 10'000'000;

struct MechanismConfig {
  double epsilon = 1.0;
  PriceGrid grid{0.0, 1.0, 0.1};
  uint64_t seed = 0;
  Variant variant = Variant::kDpam;
  // Joint mechanisms refuse grids with more scored vectors than this.
  uint64_t max_scored_vectors = kDefaultMaxScoredVectors;
};

// Exact law of an exponential mechanism over an enumerated support.
struct PriceDistribution {
  std::vector<PriceVector> support;
  std::vector<double> log_weights;
  std::vector<double> probabilities;
  // log sum_i exp(log_weights[i]).
  double log_normalizer = 0.0;

  std::size_t size() const { return support.size(); }
  // ln Pr[support[i]], exact even where probabilities[i] underflows.
  double LogProbability(std::size_t i) const {
    return log_weights[i] - log_normalizer;
  }
};

// Normalizes exp(log_weights) after subtracting the maximum log-weight.
PriceDistribution MakeDistribution(std::vector<PriceVector> support,
                                   std::vector<double> log_weights);

// Exponential mechanism over `scores`: log-weight epsilon * score / (2 *
// sensitivity). A zero sensitivity (empty market) yields all-zero scores and
// hence the uniform law.
PriceDistribution ExponentialMechanism(std::vector<PriceVector> support,
                                       std::span<const double> scores,
                                       double epsilon, double sensitivity);

// Inverse-CDF draw of a support index.
std::size_t SampleIndex(std::span<const double> probabilities, Rng& rng);

// Index of the first maximum.
std::size_t ArgMax(std::span<const double> values);

double SensitivityFull(const Scenario& scenario);
// Throws ArgumentError unless 1 <= level <= k.
double SensitivityPartial(const Scenario& scenario, int level);

// Revenue and winner count of every vector of grid^k, lexicographic order.
struct GridScores {
  std::vector<double> revenues;
  std::vector<int> winners;
};

// Throws CapacityError when levels^k exceeds `max_scored_vectors`.
GridScores ScoreGrid(const Scenario& scenario, const PriceGrid& grid,
                     uint64_t max_scored_vectors = kDefaultMaxScoredVectors);

// Exact DPAM law. Throws CapacityError as ScoreGrid.
PriceDistribution DpamDistribution(const Scenario& scenario,
                                   const MechanismConfig& config);

struct JointRun {
  AuctionOutcome outcome;
  // Exponential-mechanism law for kDpam; point mass on the argmax for kDtam.
  PriceDistribution distribution;
  GridScores scores;
  std::size_t selected_index = 0;
};

// kDpam or kDtam.
JointRun RunDpam(const Scenario& scenario, const MechanismConfig& config);

// One level of the sequential mechanisms.
struct LevelResult {
  PriceDistribution distribution;  // over the level's grid points
  std::vector<double> revenues;    // partial revenue of each grid point
  std::vector<int> winners;
  std::size_t selected_index = 0;
};

// Scores every p_l with `prefix` (length l - 1) fixed and forms the level-l
// law with budget epsilon / k and sensitivity dR^l. Does not select.
LevelResult ScoreLevel(const Scenario& scenario, const MechanismConfig& config,
                       const PriceVector& prefix);

struct SequentialRun {
  AuctionOutcome outcome;
  std::vector<LevelResult> levels;  // k entries
  std::size_t evaluations = 0;      // price evaluations performed
};

// kDpamS or kDtamS.
SequentialRun RunDpamS(const Scenario& scenario, const MechanismConfig& config);

// Exact law of the full price vector chosen by kDpamS: the product of the
// level laws over every prefix path. Enumerates levels^k paths, so the same
// capacity cap as the joint mechanism applies.
PriceDistribution DpamSJointDistribution(const Scenario& scenario,
                                         const MechanismConfig& config);

// Any variant; the price and allocation of the selected outcome.
AuctionOutcome RunMechanism(const Scenario& scenario,
                            const MechanismConfig& config);

// sum_p Pr[p] * R(p). Throws ArgumentError when the sizes differ.
double ExpectedRevenue(const PriceDistribution& distribution,
                       std::span<const double> revenues);
double ExpectedRevenue(const PriceDistribution& distribution,
                       std::span<const ScoredPrice> scored_prices);

}  // namespace dpauction

#endif  // DPAUCTION_MECHANISMS_H_
