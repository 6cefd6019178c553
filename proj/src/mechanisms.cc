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

#include "dpauction/mechanisms.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "dpauction/errors.h"

namespace dpauction {

namespace {

void CheckConfig(const MechanismConfig& config) {
  if (!(config.epsilon > 0.0)) {
    throw ArgumentError("epsilon must be > 0");
  }
}

PriceDistribution PointMass(std::vector<PriceVector> support,
                            std::size_t index) {
  std::vector<double> log_weights(support.size(),
                                  -std::numeric_limits<double>::infinity());
  log_weights[index] = 0.0;
  return MakeDistribution(std::move(support), std::move(log_weights));
}

std::vector<PriceVector> GridSupport(const PriceGrid& grid) {
  std::vector<PriceVector> support;
  support.reserve(grid.levels());
  for (double p : grid.Points()) support.push_back({p});
  return support;
}

// Prefix laws of every path below `prefix`, accumulated into `support` and
// `log_probs`.
void ExpandPaths(const Scenario& scenario, const MechanismConfig& config,
                 PriceVector& prefix, double log_prob,
                 std::vector<PriceVector>& support,
                 std::vector<double>& log_probs) {
  if (static_cast<int>(prefix.size()) == scenario.k) {
    support.push_back(prefix);
    log_probs.push_back(log_prob);
    return;
  }
  const LevelResult level = ScoreLevel(scenario, config, prefix);
  for (std::size_t t = 0; t < level.distribution.size(); ++t) {
    prefix.push_back(level.distribution.support[t][0]);
    ExpandPaths(scenario, config, prefix,
                log_prob + level.distribution.LogProbability(t), support,
                log_probs);
    prefix.pop_back();
  }
}

}  // namespace

std::string VariantName(Variant variant) {
  switch (variant) {
    case Variant::kDpam:
      return "dpam";
    case Variant::kDtam:
      return "dtam";
    case Variant::kDpamS:
      return "dpam_s";
    case Variant::kDtamS:
      return "dtam_s";
  }
  return "unknown";
}

Variant ParseVariant(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '-', '_');
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (Variant v :
       {Variant::kDpam, Variant::kDtam, Variant::kDpamS, Variant::kDtamS}) {
    if (VariantName(v) == key) return v;
  }
  throw ArgumentError("unknown mechanism variant '" + name + "'");
}

bool IsSequential(Variant variant) {
  return variant == Variant::kDpamS || variant == Variant::kDtamS;
}

bool IsPrivate(Variant variant) {
  return variant == Variant::kDpam || variant == Variant::kDpamS;
}

PriceDistribution MakeDistribution(std::vector<PriceVector> support,
                                   std::vector<double> log_weights) {
  if (support.size() != log_weights.size() || support.empty()) {
    throw ArgumentError("distribution needs one log-weight per support point");
  }
  const double max_log = *std::max_element(log_weights.begin(),
                                           log_weights.end());
  if (!std::isfinite(max_log)) {
    throw ArgumentError("distribution has no finite log-weight");
  }
  PriceDistribution dist;
  dist.probabilities.resize(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    dist.probabilities[i] = std::exp(log_weights[i] - max_log);
    total += dist.probabilities[i];
  }
  for (double& p : dist.probabilities) p /= total;
  dist.log_normalizer = max_log + std::log(total);
  dist.support = std::move(support);
  dist.log_weights = std::move(log_weights);
  return dist;
}

PriceDistribution ExponentialMechanism(std::vector<PriceVector> support,
                                       std::span<const double> scores,
                                       double epsilon, double sensitivity) {
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
  if (sensitivity < 0.0) throw ArgumentError("sensitivity must be >= 0");
  if (scores.size() != support.size()) {
    throw ArgumentError("one score per support point is required");
  }
  std::vector<double> log_weights(scores.size(), 0.0);
  if (sensitivity > 0.0) {
    const double scale = epsilon / (2.0 * sensitivity);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      log_weights[i] = scale * scores[i];
    }
  }
  return MakeDistribution(std::move(support), std::move(log_weights));
}

std::size_t SampleIndex(std::span<const double> probabilities, Rng& rng) {
  if (probabilities.empty()) throw ArgumentError("empty distribution");
  const double u = rng.UniformDouble();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    last_positive = i;
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  // Rounding left the total slightly below u.
  return last_positive;
}

std::size_t ArgMax(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("argmax of an empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double SensitivityFull(const Scenario& scenario) {
  return SensitivityPartial(scenario, scenario.k);
}

double SensitivityPartial(const Scenario& scenario, int level) {
  if (level < 1 || level > scenario.k) {
    throw ArgumentError("level must be in [1, k]");
  }
  const double range = scenario.bounds.c_max - scenario.bounds.c_min;
  double total = 0.0;
  for (const Seller& seller : scenario.sellers) {
    double units = 0.0;
    for (int z = 0; z < level; ++z) units += seller.supply[z];
    total += range * units;
  }
  return total;
}

GridScores ScoreGrid(const Scenario& scenario, const PriceGrid& grid,
                     uint64_t max_scored_vectors) {
  const PriceProduct product(grid, scenario.k);
  if (product.size() > max_scored_vectors) {
    throw CapacityError("grid^k has " + std::to_string(product.size()) +
                        " price vectors, above the cap of " +
                        std::to_string(max_scored_vectors));
  }
  const auto bids = EffectiveBids(scenario, scenario.k, PricingMode::kJoint);
  ScoringEngine engine(scenario);
  GridScores scores;
  scores.revenues.reserve(product.size());
  scores.winners.reserve(product.size());
  for (const PriceVector& price : product) {
    const auto result = engine.Score(price, bids);
    scores.revenues.push_back(result.revenue);
    scores.winners.push_back(result.winners);
  }
  return scores;
}

namespace {

std::vector<PriceVector> ProductSupport(const PriceGrid& grid, int k) {
  const PriceProduct product(grid, k);
  std::vector<PriceVector> support;
  support.reserve(product.size());
  for (const PriceVector& price : product) support.push_back(price);
  return support;
}

}  // namespace

PriceDistribution DpamDistribution(const Scenario& scenario,
                                   const MechanismConfig& config) {
  CheckConfig(config);
  const GridScores scores =
      ScoreGrid(scenario, config.grid, config.max_scored_vectors);
  return ExponentialMechanism(ProductSupport(config.grid, scenario.k),
                              scores.revenues, config.epsilon,
                              SensitivityFull(scenario));
}

JointRun RunDpam(const Scenario& scenario, const MechanismConfig& config) {
  CheckConfig(config);
  if (IsSequential(config.variant)) {
    throw ArgumentError("RunDpam needs the dpam or dtam variant");
  }
  JointRun run;
  run.scores = ScoreGrid(scenario, config.grid, config.max_scored_vectors);
  auto support = ProductSupport(config.grid, scenario.k);
  if (config.variant == Variant::kDpam) {
    run.distribution =
        ExponentialMechanism(std::move(support), run.scores.revenues,
                             config.epsilon, SensitivityFull(scenario));
    Rng rng(config.seed);
    run.selected_index = SampleIndex(run.distribution.probabilities, rng);
  } else {
    run.selected_index = ArgMax(run.scores.revenues);
    run.distribution = PointMass(std::move(support), run.selected_index);
  }
  PriceVector price = run.distribution.support[run.selected_index];
  ScoringEngine engine(scenario);
  Allocation allocation;
  engine.Score(price,
               EffectiveBids(scenario, scenario.k, PricingMode::kJoint),
               &allocation);
  run.outcome = MakeOutcome(scenario, std::move(price), std::move(allocation));
  return run;
}

namespace {

LevelResult ScoreLevelWith(ScoringEngine& engine,
                           const MechanismConfig& config,
                           const PriceVector& prefix) {
  const Scenario& scenario = engine.scenario();
  const int level = static_cast<int>(prefix.size()) + 1;
  if (level > scenario.k) throw ArgumentError("prefix already has k prices");
  const auto bids = EffectiveBids(scenario, level, PricingMode::kSequential);
  LevelResult result;
  PriceVector price = prefix;
  price.push_back(0.0);
  for (double p : config.grid.Points()) {
    price.back() = p;
    const auto scored = engine.Score(price, bids);
    result.revenues.push_back(scored.revenue);
    result.winners.push_back(scored.winners);
  }
  result.distribution = ExponentialMechanism(
      GridSupport(config.grid), result.revenues,
      config.epsilon / static_cast<double>(scenario.k),
      SensitivityPartial(scenario, level));
  return result;
}

}  // namespace

LevelResult ScoreLevel(const Scenario& scenario, const MechanismConfig& config,
                       const PriceVector& prefix) {
  CheckConfig(config);
  ScoringEngine engine(scenario);
  return ScoreLevelWith(engine, config, prefix);
}

SequentialRun RunDpamS(const Scenario& scenario, const MechanismConfig& config) {
  CheckConfig(config);
  if (!IsSequential(config.variant)) {
    throw ArgumentError("RunDpamS needs the dpam_s or dtam_s variant");
  }
  // Validates the average unit bids up front.
  EffectiveBids(scenario, 1, PricingMode::kSequential);

  SequentialRun run;
  Rng rng(config.seed);
  ScoringEngine engine(scenario);
  PriceVector price;
  for (int level = 1; level <= scenario.k; ++level) {
    LevelResult result = ScoreLevelWith(engine, config, price);
    run.evaluations += result.revenues.size();
    if (config.variant == Variant::kDpamS) {
      result.selected_index =
          SampleIndex(result.distribution.probabilities, rng);
    } else {
      result.selected_index = ArgMax(result.revenues);
      result.distribution =
          PointMass(GridSupport(config.grid), result.selected_index);
    }
    price.push_back(config.grid.Point(result.selected_index));
    run.levels.push_back(std::move(result));
  }

  // The final allocation is the level-k allocation at the chosen vector.
  Allocation allocation;
  engine.Score(price,
               EffectiveBids(scenario, scenario.k, PricingMode::kSequential),
               &allocation);
  run.outcome = MakeOutcome(scenario, std::move(price), std::move(allocation));
  return run;
}

PriceDistribution DpamSJointDistribution(const Scenario& scenario,
                                         const MechanismConfig& config) {
  CheckConfig(config);
  const uint64_t paths = ProductSize(config.grid, scenario.k);
  if (paths > config.max_scored_vectors) {
    throw CapacityError("sequential joint law has " + std::to_string(paths) +
                        " paths, above the cap of " +
                        std::to_string(config.max_scored_vectors));
  }
  std::vector<PriceVector> support;
  std::vector<double> log_probs;
  support.reserve(paths);
  log_probs.reserve(paths);
  PriceVector prefix;
  ExpandPaths(scenario, config, prefix, 0.0, support, log_probs);
  return MakeDistribution(std::move(support), std::move(log_probs));
}

AuctionOutcome RunMechanism(const Scenario& scenario,
                            const MechanismConfig& config) {
  if (IsSequential(config.variant)) return RunDpamS(scenario, config).outcome;
  return RunDpam(scenario, config).outcome;
}

double ExpectedRevenue(const PriceDistribution& distribution,
                       std::span<const double> revenues) {
  if (revenues.size() != distribution.size()) {
    throw ArgumentError("distribution support and revenues differ in size");
  }
  double expected = 0.0;
  for (std::size_t i = 0; i < revenues.size(); ++i) {
    expected += distribution.probabilities[i] * revenues[i];
  }
  return expected;
}

double ExpectedRevenue(const PriceDistribution& distribution,
                       std::span<const ScoredPrice> scored_prices) {
  if (scored_prices.size() != distribution.size()) {
    throw ArgumentError("distribution support and scored prices differ");
  }
  std::vector<double> revenues;
  revenues.reserve(scored_prices.size());
  for (std::size_t i = 0; i < scored_prices.size(); ++i) {
    if (scored_prices[i].price != distribution.support[i]) {
      throw ArgumentError("scored price " + std::to_string(i) +
                          " does not match the distribution support");
    }
    revenues.push_back(scored_prices[i].revenue);
  }
  return ExpectedRevenue(distribution, revenues);
}

}  // namespace dpauction
