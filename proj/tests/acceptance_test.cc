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

// Acceptance suite. Prints one "criterion N: PASS|FAIL" line per criterion
// and exits nonzero when any criterion fails. Sweep results are written to
// the directory given as the first argument (default: acceptance_results).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dpauction/audit.h"
#include "dpauction/errors.h"
#include "dpauction/experiments.h"
#include "dpauction/mechanisms.h"
#include "dpauction/oracle.h"
#include "dpauction/scenario.h"
#include "test_util.h"

namespace dpauction {
namespace {

constexpr uint64_t kCorpusSeed = 2026;

// Values of the worked instance from an independent brute-force evaluator.
constexpr double kT1Revenues[] = {0.0, 0.19999999999999996, 0.0};
constexpr double kT1Probabilities[] = {0.32204346439638981,
                                       0.35591307120722027,
                                       0.32204346439638981};
constexpr double kT1ExpectedRevenue = 0.071182614241444037;
constexpr double kT1Opt = 0.2;
constexpr double kT1FTheta = 0.05;
constexpr double kT1Bound = -6.6181264310618904;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [violated: " << what << "]";
    }
  }
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

MechanismConfig Config(double epsilon, double granularity, Variant variant,
                       uint64_t seed = 0) {
  return MechanismConfig{.epsilon = epsilon,
                         .grid = PriceGrid(0.0, 1.0, granularity),
                         .seed = seed,
                         .variant = variant};
}

void Criterion1(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  AuditReport joint{.check_name = "dpam"};
  AuditReport sequential{.check_name = "dpam_s"};
  int instances = 0;
  for (int s = 0; s < 20; ++s) {
    const Scenario scenario = testing::OracleScaleScenario(kCorpusSeed, s);
    for (double epsilon : {0.1, 1.0, 4.0}) {
      const uint64_t seed = DeriveSeed(kCorpusSeed, s);
      joint.Merge(AuditDp(scenario, Config(epsilon, 0.5, Variant::kDpam), 10,
                          seed));
      sequential.Merge(AuditDp(
          scenario, Config(epsilon, 0.5, Variant::kDpamS), 10, seed));
      ++instances;
    }
  }
  const double seconds = Seconds(start);
  out.detail << instances << " (scenario, epsilon) pairs x 10 neighbors; "
             << joint.Summary() << "; " << sequential.Summary();
  out.Check(joint.passed(), "dpam log gap > epsilon + 1e-6");
  out.Check(sequential.passed(), "dpam_s level gaps > epsilon + k * 1e-6");
  out.Check(seconds < 120.0, "runtime >= 2 min");
}

void Criterion2(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  const DeviationGrid deviations = DefaultDeviationGrid();
  const PriceGrid grid(0.0, 1.0, 0.1);
  int positive = 0;
  long prices = 0;
  double max_gain = 0.0;
  std::string first_case;
  // Positive-gain cases keyed by "k=<k> <side of the largest gain>".
  std::map<std::string, int> by_kind;
  for (int s = 0; s < 200; ++s) {
    const Scenario scenario = testing::OracleScaleScenario(kCorpusSeed + 1, s);
    for (const PriceVector& price : PriceProduct(grid, scenario.k)) {
      const AuditReport report =
          AuditTruthfulnessFixedPrice(scenario, price, deviations);
      ++prices;
      max_gain = std::max(max_gain, report.max_statistic);
      if (report.passed()) continue;
      ++positive;
      const std::string what =
          report.worst_case.substr(0, report.worst_case.find('\n'));
      const bool seller = what.find("seller") != std::string::npos;
      ++by_kind["k=" + std::to_string(scenario.k) +
                (seller ? " seller" : " buyer")];
      if (first_case.empty()) {
        first_case = "scenario " + std::to_string(s) + ", " + what;
      }
    }
  }
  const double seconds = Seconds(start);
  out.detail << "200 scenarios, " << prices
             << " (scenario, price) pairs, positive-gain cases=" << positive
             << " max_gain=" << max_gain;
  for (const auto& [kind, count] : by_kind) {
    out.detail << " " << kind << ":" << count;
  }
  if (!first_case.empty()) out.detail << "; first: " << first_case;
  out.Check(positive == 0, "positive utility gain at a fixed price");
  out.Check(seconds < 120.0, "runtime >= 2 min");
}

void Criterion3(Outcome& out) {
  const DeviationGrid deviations = DefaultDeviationGrid();
  AuditReport total{.check_name = "expected gain"};
  double worst_ratio = 0.0;
  for (int s = 0; s < 20; ++s) {
    const Scenario scenario = testing::OracleScaleScenario(kCorpusSeed + 2, s);
    for (double epsilon : {1.0, 4.0}) {
      for (Variant variant : {Variant::kDpam, Variant::kDpamS}) {
        const AuditReport report = AuditTruthfulnessExpected(
            scenario, Config(epsilon, 0.5, variant), deviations);
        worst_ratio =
            std::max(worst_ratio, report.max_statistic / report.bound);
        total.Merge(report);
      }
    }
  }
  out.detail << total.Summary() << " largest gain / gamma=" << worst_ratio;
  out.Check(total.passed(), "expected gain > gamma + 1e-9");
}

void Criterion4(Outcome& out) {
  GeneratorParams params;
  std::vector<Scenario> scenarios;
  for (int s = 0; s < 1000; ++s) {
    params.seed = DeriveSeed(kCorpusSeed + 3, s);
    scenarios.push_back(Generate(params));
  }
  try {
    const AuditReport report =
        AuditIrBudget(scenarios, Config(200.0, 0.1, Variant::kDpam, 7));
    out.detail << "1000 scenarios (m=100, n=10, k=3) x 4 variants; "
               << report.Summary();
    out.Check(report.passed(), "negative utility, revenue or slack");
  } catch (const std::exception& e) {
    out.detail << "exception: " << e.what();
    out.Check(false, "exception raised");
  }
}

double SequentialExpectedRevenue(const Scenario& scenario,
                                 const MechanismConfig& config) {
  const PriceDistribution law = DpamSJointDistribution(scenario, config);
  double total = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    total += law.probabilities[i] *
             ScorePrice(scenario, law.support[i], PricingMode::kJoint).revenue;
  }
  return total;
}

void Criterion5(Outcome& out) {
  int sandwich_failures = 0;
  int bound_failures = 0;
  double min_margin = INFINITY;
  for (int s = 0; s < 200; ++s) {
    const Scenario scenario = testing::OracleScaleScenario(kCorpusSeed + 4, s);
    const OracleResult base =
        EvaluateOracle(scenario, Config(1.0, 0.5, Variant::kDpam));
    if (base.f_theta * base.opt > base.opt_star + 1e-9 ||
        base.opt_star > base.opt + 1e-9) {
      ++sandwich_failures;
    }
    for (double epsilon : {1.0, 4.0, 20.0, 100.0}) {
      const MechanismConfig joint = Config(epsilon, 0.5, Variant::kDpam);
      const MechanismConfig seq = Config(epsilon, 0.5, Variant::kDpamS);
      const OracleResult oracle = EvaluateOracle(scenario, joint);
      const double joint_revenue =
          ExpectedRevenue(DpamDistribution(scenario, joint),
                          ScoreGrid(scenario, joint.grid).revenues);
      const double seq_revenue = SequentialExpectedRevenue(scenario, seq);
      min_margin = std::min({min_margin, joint_revenue - oracle.bound_dpam,
                             seq_revenue - oracle.bound_dpam_s});
      if (joint_revenue < oracle.bound_dpam - 1e-9) ++bound_failures;
      if (seq_revenue < oracle.bound_dpam_s - 1e-9) ++bound_failures;
    }
  }
  out.detail << "200 scenarios; sandwich failures=" << sandwich_failures
             << " bound failures=" << bound_failures
             << " min E[R] - bound=" << min_margin;
  out.Check(sandwich_failures == 0, "F * OPT <= OPT* <= OPT");
  out.Check(bound_failures == 0, "E[R] >= revenue bound");
}

// Compares 1e5 mechanism draws against the exact law with 3-sigma bands.
int SamplingBandViolations(const Scenario& scenario, MechanismConfig config,
                           const PriceDistribution& law) {
  constexpr int kDraws = 100000;
  std::map<PriceVector, int> counts;
  const uint64_t base = config.seed;
  for (int d = 0; d < kDraws; ++d) {
    config.seed = DeriveSeed(base, d);
    ++counts[RunMechanism(scenario, config).price];
  }
  int violations = 0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    const double p = law.probabilities[i];
    const double mean = kDraws * p;
    const double band = 3.0 * std::sqrt(kDraws * p * (1.0 - p));
    const auto it = counts.find(law.support[i]);
    const int observed = it == counts.end() ? 0 : it->second;
    if (std::abs(observed - mean) > band) ++violations;
  }
  return violations;
}

void Criterion6(Outcome& out) {
  const std::vector<double> ladder = {1, 10, 50, 100, 200};
  int monotone_failures = 0;
  int dominance_failures = 0;
  for (int s = 0; s < 20; ++s) {
    GeneratorParams params;
    params.seed = DeriveSeed(kCorpusSeed + 5, s);
    const Scenario scenario = Generate(params);
    const GridScores scores = ScoreGrid(scenario, PriceGrid(0.0, 1.0, 0.1));
    const double best =
        *std::max_element(scores.revenues.begin(), scores.revenues.end());
    const double dtam =
        RunMechanism(scenario, Config(1.0, 0.1, Variant::kDtam)).revenue;
    if (dtam != best) ++dominance_failures;
    double previous = -INFINITY;
    for (double epsilon : ladder) {
      const double expected = ExpectedRevenue(
          DpamDistribution(scenario, Config(epsilon, 0.1, Variant::kDpam)),
          scores.revenues);
      if (expected < previous - 1e-9) ++monotone_failures;
      if (dtam < expected - 1e-9) ++dominance_failures;
      previous = expected;
    }
  }
  int band_violations = 0;
  int support_points = 0;
  const MechanismConfig t1 = testing::T1Config(4.0);
  const PriceDistribution t1_law = DpamDistribution(testing::T1(), t1);
  band_violations += SamplingBandViolations(testing::T1(), t1, t1_law);
  support_points += t1_law.size();
  for (int s = 0; s < 2; ++s) {
    const Scenario scenario = testing::OracleScaleScenario(kCorpusSeed + 6, s);
    MechanismConfig joint = Config(1.0, 0.5, Variant::kDpam, 11);
    const PriceDistribution law = DpamDistribution(scenario, joint);
    band_violations += SamplingBandViolations(scenario, joint, law);
    support_points += law.size();
    MechanismConfig seq = Config(1.0, 0.5, Variant::kDpamS, 13);
    const PriceDistribution seq_law = DpamSJointDistribution(scenario, seq);
    band_violations += SamplingBandViolations(scenario, seq, seq_law);
    support_points += seq_law.size();
  }
  out.detail << "20 scenarios; monotonicity failures=" << monotone_failures
             << " dtam failures=" << dominance_failures
             << "; sampling: " << band_violations << " of " << support_points
             << " support points outside 3-sigma bands";
  out.Check(monotone_failures == 0, "E[R] nondecreasing in epsilon");
  out.Check(dominance_failures == 0, "DTAM = max score >= E[R_DPAM]");
  out.Check(band_violations == 0, "sampling frequencies within 3 sigma");
}

const MetricsRow& Row(const std::vector<MetricsRow>& rows, Variant variant,
                      double value) {
  for (const MetricsRow& row : rows) {
    if (row.variant == variant && row.swept_value == value) return row;
  }
  throw ArgumentError("missing results row");
}

std::vector<MetricsRow> Sweep(SweepParameter parameter,
                              std::vector<double> values,
                              const std::filesystem::path& dir) {
  SweepSpec spec;
  spec.parameter = parameter;
  spec.values = std::move(values);
  spec.seed = kCorpusSeed + 7;
  std::vector<MetricsRow> rows = RunSweep(spec);
  EmitResults(rows, spec, dir / (SweepParameterName(parameter) + ".csv"),
              EmitOptions{});
  return rows;
}

void Criterion7(Outcome& out, const std::filesystem::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(dir);
  const std::vector<double> ms = {25, 50, 100, 200};
  const std::vector<MetricsRow> by_m = Sweep(SweepParameter::kM, ms, dir);
  const std::vector<MetricsRow> by_granularity =
      Sweep(SweepParameter::kGranularity, {0.5, 0.25, 0.1, 0.05}, dir);
  const std::vector<double> epsilons = {1, 10, 50, 100, 200, 400};
  const std::vector<MetricsRow> by_epsilon =
      Sweep(SweepParameter::kEpsilon, epsilons, dir);
  const std::vector<MetricsRow> by_k =
      Sweep(SweepParameter::kK, {1, 2, 3, 4, 5}, dir);
  const double seconds = Seconds(start);

  int dominance_failures = 0;
  for (const auto* rows : {&by_m, &by_granularity, &by_epsilon, &by_k}) {
    for (const MetricsRow& row : *rows) {
      if (row.variant != Variant::kDtam || row.skipped()) continue;
      const MetricsRow& dpam = Row(*rows, Variant::kDpam, row.swept_value);
      if (!dpam.skipped() && row.expected_revenue < dpam.expected_revenue) {
        ++dominance_failures;
      }
    }
  }
  out.detail << " dtam < dpam cells=" << dominance_failures << ";";
  out.Check(dominance_failures == 0, "dtam mean revenue >= dpam");
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    out.Check(Row(by_epsilon, Variant::kDpam, epsilons[i]).expected_revenue >=
                  Row(by_epsilon, Variant::kDpam, epsilons[i - 1])
                      .expected_revenue,
              "dpam revenue nondecreasing in epsilon");
  }

  for (Variant v : {Variant::kDpam, Variant::kDtam, Variant::kDpamS,
                    Variant::kDtamS}) {
    const std::string name = VariantName(v);
    out.detail << " " << name << " revenue/satisfaction by m:";
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const MetricsRow& row = Row(by_m, v, ms[i]);
      out.detail << " " << row.expected_revenue << "/" << row.satisfaction;
      if (i == 0) continue;
      const MetricsRow& prev = Row(by_m, v, ms[i - 1]);
      out.Check(row.expected_revenue >= prev.expected_revenue,
                name + " revenue nondecreasing in m");
      out.Check(row.satisfaction <= prev.satisfaction,
                name + " satisfaction nonincreasing in m");
    }
    out.detail << ";";
  }
  const double fine = Row(by_granularity, Variant::kDpam, 0.05).expected_revenue;
  const double coarse =
      Row(by_granularity, Variant::kDpam, 0.5).expected_revenue;
  out.detail << " dpam revenue at granularity 0.05/0.5: " << fine << "/"
             << coarse << ";";
  out.Check(fine >= coarse, "dpam revenue(0.05) >= revenue(0.5)");
  for (Variant v : {Variant::kDpam, Variant::kDpamS}) {
    const MetricsRow& low = Row(by_epsilon, v, 1);
    const MetricsRow& high = Row(by_epsilon, v, 200);
    out.detail << " " << VariantName(v) << " epsilon 1 -> 200: revenue "
               << low.expected_revenue << " -> " << high.expected_revenue
               << ", satisfaction " << low.satisfaction << " -> "
               << high.satisfaction << ";";
    out.Check(high.expected_revenue > low.expected_revenue,
              VariantName(v) + " revenue increases with epsilon");
    out.Check(high.satisfaction > low.satisfaction,
              VariantName(v) + " satisfaction increases with epsilon");
  }
  int skipped = 0;
  for (const auto* rows : {&by_m, &by_granularity, &by_epsilon, &by_k}) {
    for (const MetricsRow& row : *rows) skipped += row.skipped();
  }
  out.detail << " skipped rows=" << skipped << " results in " << dir.string()
             << " sweeps took " << seconds << " s";
  out.Check(seconds < 1800.0, "runtime >= 30 min");
}

// Mean seconds per mechanism run over `trials` default-scale scenarios.
double MeanRunSeconds(int k, Variant variant, int trials) {
  GeneratorParams params;
  params.k = k;
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    params.seed = DeriveSeed(kCorpusSeed + 8, t);
    const Scenario scenario = Generate(params);
    const MechanismConfig config = Config(200.0, 0.1, variant, t);
    const auto start = std::chrono::steady_clock::now();
    const AuctionOutcome outcome = RunMechanism(scenario, config);
    total += Seconds(start);
    if (outcome.price.size() != static_cast<std::size_t>(k)) {
      throw ArgumentError("unexpected price length");
    }
  }
  return total / trials;
}

void Criterion8(Outcome& out) {
  constexpr int kTrials = 50;
  // Warm-up so the first measurement does not pay for cold caches.
  MeanRunSeconds(3, Variant::kDpam, 2);
  const double dpam3 = MeanRunSeconds(3, Variant::kDpam, kTrials);
  const double seq3 = MeanRunSeconds(3, Variant::kDpamS, kTrials);
  const double seq1 = MeanRunSeconds(1, Variant::kDpamS, kTrials);
  const double seq5 = MeanRunSeconds(5, Variant::kDpamS, kTrials);
  out.detail << "per-trial seconds: dpam k=3 " << dpam3 << ", dpam_s k=1 "
             << seq1 << ", k=3 " << seq3 << ", k=5 " << seq5
             << "; dpam/dpam_s at k=3 = " << dpam3 / seq3
             << ", dpam_s k=5/k=1 = " << seq5 / seq1;
  out.Check(dpam3 >= 5.0 * seq3, "dpam(k=3) >= 5 x dpam_s(k=3)");
  out.Check(seq5 <= 3.0 * seq1, "dpam_s(k=5) <= 3 x dpam_s(k=1)");
}

void Criterion9(Outcome& out) {
  const Scenario t1 = testing::T1();
  const MechanismConfig config = testing::T1Config(4.0);
  const GridScores scores = ScoreGrid(t1, config.grid);
  const PriceDistribution law = DpamDistribution(t1, config);
  const OracleResult oracle = EvaluateOracle(t1, config);
  MechanismConfig dtam = config;
  dtam.variant = Variant::kDtam;
  const AuctionOutcome det = RunMechanism(t1, dtam);
  const double closed_form = std::exp(0.1) / (2.0 + std::exp(0.1));
  const double expected = ExpectedRevenue(law, scores.revenues);

  bool revenues_ok = scores.revenues.size() == 3;
  bool probabilities_ok = law.size() == 3;
  for (std::size_t i = 0; revenues_ok && i < 3; ++i) {
    revenues_ok = std::abs(scores.revenues[i] - kT1Revenues[i]) <= 1e-12;
  }
  for (std::size_t i = 0; probabilities_ok && i < 3; ++i) {
    probabilities_ok =
        std::abs(law.probabilities[i] - kT1Probabilities[i]) <= 1e-12;
  }
  out.detail << "revenues [" << scores.revenues[0] << ", "
             << scores.revenues[1] << ", " << scores.revenues[2]
             << "] dtam price " << det.price[0] << " sensitivity "
             << SensitivityFull(t1) << " Pr[0.5]=" << law.probabilities[1]
             << " E[R]=" << expected << " OPT=" << oracle.opt
             << " F=" << oracle.f_theta << " bound=" << oracle.bound_dpam;
  out.Check(revenues_ok, "scored revenues");
  out.Check(det.price == PriceVector{0.5}, "dtam price 0.5");
  out.Check(SensitivityFull(t1) == 4.0, "sensitivity 4");
  out.Check(probabilities_ok, "frozen probabilities");
  out.Check(std::abs(law.probabilities[1] - closed_form) <= 1e-12,
            "closed-form Pr[0.5]");
  out.Check(std::abs(expected - kT1ExpectedRevenue) <= 1e-12, "frozen E[R]");
  out.Check(std::abs(expected - 0.2 * closed_form) <= 1e-12,
            "E[R] = 0.2 Pr[0.5]");
  out.Check(std::abs(oracle.opt - kT1Opt) <= 1e-9, "OPT");
  out.Check(std::abs(oracle.f_theta - kT1FTheta) <= 1e-9, "F");
  out.Check(std::abs(oracle.bound_dpam - kT1Bound) <= 1e-9, "revenue bound");
}

}  // namespace
}  // namespace dpauction

int main(int argc, char** argv) {
  using dpauction::Outcome;
  const std::filesystem::path results_dir =
      argc > 1 ? argv[1] : "acceptance_results";
  const std::vector<std::function<void(Outcome&)>> criteria = {
      dpauction::Criterion1,
      dpauction::Criterion2,
      dpauction::Criterion3,
      dpauction::Criterion4,
      dpauction::Criterion5,
      dpauction::Criterion6,
      [&](Outcome& out) { dpauction::Criterion7(out, results_dir); },
      dpauction::Criterion8,
      dpauction::Criterion9,
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i](out);
    } catch (const std::exception& e) {
      out.detail << " exception: " << e.what();
      out.passed = false;
    }
    const double seconds = dpauction::Seconds(start);
    std::printf("criterion %zu: %s (%.1f s) %s\n", i + 1,
                out.passed ? "PASS" : "FAIL", seconds,
                out.detail.str().c_str());
    std::fflush(stdout);
    failures += !out.passed;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
