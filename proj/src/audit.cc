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

#include "dpauction/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpauction/allocation.h"
#include "dpauction/errors.h"
#include "dpauction/price_grid.h"
#include "dpauction/random.h"
#include "dpauction/scenario.h"

namespace dpauction {

namespace {

constexpr double kDpTolerance = 1e-6;
constexpr double kUtilityTolerance = 1e-9;

AuditReport NewReport(std::string name, double bound, double tolerance) {
  AuditReport report;
  report.check_name = std::move(name);
  report.bound = bound;
  report.tolerance = tolerance;
  return report;
}

std::string DescribeCase(const Scenario& scenario, const std::string& what) {
  return what + "\n" + ScenarioToJson(scenario).dump();
}

// Records one instance. `describe` is only called for a new worst case.
template <typename Describe>
void Observe(AuditReport& report, double statistic, double bound,
             double tolerance, Describe&& describe) {
  ++report.instances_tested;
  const double violation = std::max(0.0, statistic - bound - tolerance);
  const bool worse = violation > report.max_violation ||
                     (violation == report.max_violation &&
                      statistic > report.max_statistic);
  if (worse || report.worst_case.empty()) {
    report.max_statistic = std::max(report.max_statistic, statistic);
    report.worst_case = describe();
  }
  report.max_violation = std::max(report.max_violation, violation);
}

std::string VectorText(const std::vector<double>& values) {
  std::ostringstream out;
  out.precision(17);
  out << "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i ? ", " : "") << values[i];
  }
  out << ")";
  return out.str();
}

void RequirePrivate(const MechanismConfig& config) {
  if (!IsPrivate(config.variant)) {
    throw ArgumentError("audit needs the dpam or dpam_s variant, not " +
                        VariantName(config.variant));
  }
}

PriceDistribution FullLaw(const Scenario& scenario,
                          const MechanismConfig& config) {
  return IsSequential(config.variant)
             ? DpamSJointDistribution(scenario, config)
             : DpamDistribution(scenario, config);
}

double BuyerGain(const Scenario& truthful, const Scenario& deviating,
                 std::size_t i, const PriceVector& price,
                 const Allocation& truthful_allocation) {
  const Allocation allocation =
      ScorePrice(deviating, price, PricingMode::kJoint).allocation;
  return BuyerUtility(deviating, i, allocation, price) -
         BuyerUtility(truthful, i, truthful_allocation, price);
}

double SellerGain(const Scenario& truthful, const Scenario& deviating,
                  std::size_t j, const PriceVector& price,
                  const Allocation& truthful_allocation) {
  const Allocation allocation =
      ScorePrice(deviating, price, PricingMode::kJoint).allocation;
  return SellerUtility(deviating, j, allocation, price) -
         SellerUtility(truthful, j, truthful_allocation, price);
}

Scenario WithBid(const Scenario& scenario, std::size_t i, double bid) {
  Scenario out = scenario;
  out.buyers[i].bid = bid;
  return out;
}

Scenario WithAskShift(const Scenario& scenario, std::size_t j, double shift) {
  Scenario out = scenario;
  for (double& a : out.sellers[j].ask) {
    a = std::clamp(a + shift, scenario.bounds.c_min, scenario.bounds.c_max);
  }
  return out;
}

}  // namespace

void AuditReport::Merge(const AuditReport& other) {
  instances_tested += other.instances_tested;
  const bool worse = other.max_violation > max_violation ||
                     (other.max_violation == max_violation &&
                      other.max_statistic > max_statistic);
  if (worse || worst_case.empty()) {
    max_statistic = std::max(max_statistic, other.max_statistic);
    bound = other.bound;
    worst_case = other.worst_case;
  }
  max_violation = std::max(max_violation, other.max_violation);
  tolerance = std::max(tolerance, other.tolerance);
  if (check_name.empty()) check_name = other.check_name;
}

std::string AuditReport::Summary() const {
  std::ostringstream out;
  out.precision(6);
  out << check_name << ": " << (passed() ? "PASS" : "FAIL")
      << " instances=" << instances_tested << " max_statistic=" << max_statistic
      << " bound=" << bound << " tolerance=" << tolerance
      << " max_violation=" << max_violation;
  return out.str();
}

double MaxLogGap(const PriceDistribution& a, const PriceDistribution& b) {
  if (a.size() != b.size()) {
    throw ArgumentError("distributions have different supports");
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.support[i] != b.support[i]) {
      throw ArgumentError("distributions have different supports");
    }
    const double la = a.LogProbability(i);
    const double lb = b.LogProbability(i);
    if (std::isinf(la) && std::isinf(lb)) continue;
    if (std::isinf(la) || std::isinf(lb)) {
      return std::numeric_limits<double>::infinity();
    }
    gap = std::max(gap, std::abs(la - lb));
  }
  return gap;
}

std::vector<double> SequentialLevelGaps(const Scenario& a, const Scenario& b,
                                        const MechanismConfig& config) {
  if (a.k != b.k) throw ArgumentError("scenarios differ in k");
  const uint64_t paths = ProductSize(config.grid, a.k);
  if (paths > config.max_scored_vectors) {
    throw CapacityError("per-level audit needs " + std::to_string(paths) +
                        " scored prices, above the cap");
  }
  std::vector<double> gaps;
  for (int level = 1; level <= a.k; ++level) {
    double gap = 0.0;
    auto visit = [&](const PriceVector& prefix) {
      gap = std::max(gap, MaxLogGap(ScoreLevel(a, config, prefix).distribution,
                                    ScoreLevel(b, config, prefix).distribution));
    };
    if (level == 1) {
      visit({});
    } else {
      for (const PriceVector& prefix : PriceProduct(config.grid, level - 1)) {
        visit(prefix);
      }
    }
    gaps.push_back(gap);
  }
  return gaps;
}

std::vector<Neighbor> MakeNeighbors(const Scenario& scenario,
                                    int num_neighbors, uint64_t seed) {
  const MarketBounds& bounds = scenario.bounds;
  const std::size_t m = scenario.num_buyers();
  const std::size_t n = scenario.num_sellers();
  std::vector<Neighbor> neighbors;
  if (m == 0 && n == 0) return neighbors;
  Rng rng(seed);
  for (int t = 0; t < num_neighbors; ++t) {
    const bool buyer_side = n == 0 || (m > 0 && t % 2 == 0);
    Neighbor neighbor{scenario, ""};
    std::ostringstream change;
    change.precision(17);
    if (buyer_side) {
      const auto i = rng.UniformIndex(m);
      const double bid = rng.Uniform(bounds.v_min, bounds.v_max);
      change << "buyer " << i << " bid " << scenario.buyers[i].bid << " -> "
             << bid;
      neighbor.scenario.buyers[i].bid = bid;
    } else {
      const auto j = rng.UniformIndex(n);
      ResourceVector& ask = neighbor.scenario.sellers[j].ask;
      for (double& a : ask) a = rng.Uniform(bounds.c_min, bounds.c_max);
      change << "seller " << j << " ask " << VectorText(scenario.sellers[j].ask)
             << " -> " << VectorText(ask);
    }
    neighbor.change = change.str();
    neighbors.push_back(std::move(neighbor));
  }
  return neighbors;
}

AuditReport AuditDp(const Scenario& scenario, const MechanismConfig& config,
                    int num_neighbors, uint64_t seed) {
  RequirePrivate(config);
  const bool sequential = IsSequential(config.variant);
  const double tolerance = sequential ? scenario.k * kDpTolerance : kDpTolerance;
  AuditReport report =
      NewReport("dp/" + VariantName(config.variant), config.epsilon, tolerance);
  const PriceDistribution base = FullLaw(scenario, config);
  for (const Neighbor& neighbor : MakeNeighbors(scenario, num_neighbors, seed)) {
    const double joint_gap =
        MaxLogGap(base, FullLaw(neighbor.scenario, config));
    double statistic = joint_gap;
    std::string detail;
    if (sequential) {
      const auto gaps = SequentialLevelGaps(scenario, neighbor.scenario, config);
      double total = 0.0;
      for (double g : gaps) total += g;
      statistic = std::max(statistic, total);
      detail = " level gaps " + VectorText(gaps);
    }
    Observe(report, statistic, config.epsilon, tolerance, [&] {
      std::ostringstream what;
      what.precision(17);
      what << neighbor.change << ": joint gap " << joint_gap << detail;
      return DescribeCase(scenario, what.str());
    });
  }
  return report;
}

DeviationGrid DefaultDeviationGrid() {
  return DeviationGrid{
      .bid_multiples = {0.5, 0.7, 0.85, 0.95, 1.0, 1.05, 1.15, 1.3, 1.5},
      .ask_shifts = {-0.2, -0.1, -0.05, 0.05, 0.1, 0.2},
  };
}

AuditReport AuditTruthfulnessFixedPrice(const Scenario& scenario,
                                        const PriceVector& price,
                                        const DeviationGrid& deviations) {
  if (static_cast<int>(price.size()) != scenario.k) {
    throw ArgumentError("fixed-price audit needs a full price vector");
  }
  AuditReport report =
      NewReport("truthfulness/fixed_price", 0.0, kUtilityTolerance);
  const Allocation truthful =
      ScorePrice(scenario, price, PricingMode::kJoint).allocation;
  for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
    for (double multiple : deviations.bid_multiples) {
      const double bid = multiple * scenario.buyers[i].valuation;
      const Scenario deviating = WithBid(scenario, i, bid);
      const double gain = BuyerGain(scenario, deviating, i, price, truthful);
      Observe(report, gain, 0.0, kUtilityTolerance, [&] {
        std::ostringstream what;
        what.precision(17);
        what << "price " << VectorText(price) << ", buyer " << i << " bids "
             << bid << ": gain " << gain;
        return DescribeCase(scenario, what.str());
      });
    }
  }
  for (std::size_t j = 0; j < scenario.num_sellers(); ++j) {
    for (double shift : deviations.ask_shifts) {
      const Scenario deviating = WithAskShift(scenario, j, shift);
      const double gain = SellerGain(scenario, deviating, j, price, truthful);
      Observe(report, gain, 0.0, kUtilityTolerance, [&] {
        std::ostringstream what;
        what.precision(17);
        what << "price " << VectorText(price) << ", seller " << j
             << " shifts asks by " << shift << ": gain " << gain;
        return DescribeCase(scenario, what.str());
      });
    }
  }
  return report;
}

ExpectedUtilities ComputeExpectedUtilities(const Scenario& scenario,
                                           const MechanismConfig& config) {
  RequirePrivate(config);
  const PriceDistribution law = FullLaw(scenario, config);
  ExpectedUtilities expected;
  expected.buyers.assign(scenario.num_buyers(), 0.0);
  expected.sellers.assign(scenario.num_sellers(), 0.0);
  // The sequential mechanism's final allocation is the level-k one, where
  // effective bids equal the reported bids, so both laws share this step.
  for (std::size_t t = 0; t < law.size(); ++t) {
    const double pr = law.probabilities[t];
    if (pr == 0.0) continue;
    const PriceVector& price = law.support[t];
    const Allocation allocation =
        ScorePrice(scenario, price, PricingMode::kJoint).allocation;
    for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
      expected.buyers[i] += pr * BuyerUtility(scenario, i, allocation, price);
    }
    for (std::size_t j = 0; j < scenario.num_sellers(); ++j) {
      expected.sellers[j] += pr * SellerUtility(scenario, j, allocation, price);
    }
  }
  return expected;
}

double GammaBound(const Scenario& scenario, double epsilon) {
  const MarketBounds& b = scenario.bounds;
  return std::max(epsilon * b.v_max,
                  epsilon * (b.c_max - b.c_min) * scenario.k * b.h_max);
}

AuditReport AuditTruthfulnessExpected(const Scenario& scenario,
                                      const MechanismConfig& config,
                                      const DeviationGrid& deviations) {
  RequirePrivate(config);
  const double gamma = GammaBound(scenario, config.epsilon);
  AuditReport report =
      NewReport("truthfulness/expected/" + VariantName(config.variant), gamma,
                kUtilityTolerance);
  const ExpectedUtilities truthful = ComputeExpectedUtilities(scenario, config);
  for (std::size_t i = 0; i < scenario.num_buyers(); ++i) {
    for (double multiple : deviations.bid_multiples) {
      const double bid = multiple * scenario.buyers[i].valuation;
      const double gain =
          ComputeExpectedUtilities(WithBid(scenario, i, bid), config)
              .buyers[i] -
          truthful.buyers[i];
      Observe(report, gain, gamma, kUtilityTolerance, [&] {
        std::ostringstream what;
        what.precision(17);
        what << "buyer " << i << " bids " << bid << ": expected gain " << gain;
        return DescribeCase(scenario, what.str());
      });
    }
  }
  for (std::size_t j = 0; j < scenario.num_sellers(); ++j) {
    for (double shift : deviations.ask_shifts) {
      const double gain =
          ComputeExpectedUtilities(WithAskShift(scenario, j, shift), config)
              .sellers[j] -
          truthful.sellers[j];
      Observe(report, gain, gamma, kUtilityTolerance, [&] {
        std::ostringstream what;
        what.precision(17);
        what << "seller " << j << " shifts asks by " << shift
             << ": expected gain " << gain;
        return DescribeCase(scenario, what.str());
      });
    }
  }
  return report;
}

AuditReport AuditIrBudget(std::span<const Scenario> scenarios,
                          const MechanismConfig& config) {
  AuditReport report = NewReport("ir_budget", 0.0, kUtilityTolerance);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const Scenario& scenario = scenarios[s];
    for (const Buyer& buyer : scenario.buyers) {
      if (buyer.bid != buyer.valuation) {
        throw ArgumentError("IR audit needs truthful bids (scenario " +
                            std::to_string(s) + ")");
      }
    }
    for (const Seller& seller : scenario.sellers) {
      if (seller.ask != seller.cost) {
        throw ArgumentError("IR audit needs truthful asks (scenario " +
                            std::to_string(s) + ")");
      }
    }
    for (Variant variant : {Variant::kDpam, Variant::kDtam, Variant::kDpamS,
                            Variant::kDtamS}) {
      MechanismConfig run_config = config;
      run_config.variant = variant;
      run_config.seed = DeriveSeed(config.seed, s);
      const AuctionOutcome outcome = RunMechanism(scenario, run_config);
      double worst = -outcome.revenue;
      std::string what = "revenue";
      for (std::size_t i = 0; i < outcome.buyer_utilities.size(); ++i) {
        if (-outcome.buyer_utilities[i] > worst) {
          worst = -outcome.buyer_utilities[i];
          what = "buyer " + std::to_string(i) + " utility";
        }
      }
      for (std::size_t j = 0; j < outcome.seller_utilities.size(); ++j) {
        if (-outcome.seller_utilities[j] > worst) {
          worst = -outcome.seller_utilities[j];
          what = "seller " + std::to_string(j) + " utility";
        }
      }
      for (const ConstraintViolation& v :
           ValidateAllocation(scenario, outcome.allocation)) {
        if (-v.slack > worst) {
          worst = -v.slack;
          what = v.ToString();
        }
      }
      Observe(report, worst, 0.0, kUtilityTolerance, [&] {
        return DescribeCase(scenario, VariantName(variant) + " at price " +
                                          VectorText(outcome.price) + ": " +
                                          what);
      });
    }
  }
  return report;
}

}  // namespace dpauction
