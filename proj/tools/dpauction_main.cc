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

// dpauction command-line tool.
//
//   dpauction run --sweep m --values 25,50,100,200 --out results.csv
//   dpauction scenario gen --m 6 --n 3 --k 2 --seed 7 --out s.json
//   dpauction scenario validate s.json
//   dpauction auction s.json --variant dpam --epsilon 4 --granularity 0.5
//   dpauction audit dp --scenario s.json --epsilon 1
//   dpauction audit truthfulness --corpus 200 --mode fixed
//   dpauction audit ir --corpus 1000
//   dpauction oracle s.json --granularity 0.5 --epsilon 4
//
// Exit status: 0 on success, 1 when an audit fails, 2 on any error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpauction/audit.h"
#include "dpauction/errors.h"
#include "dpauction/experiments.h"
#include "dpauction/mechanisms.h"
#include "dpauction/oracle.h"
#include "dpauction/price_grid.h"
#include "dpauction/scenario.h"

namespace {

using dpauction::AuditReport;
using dpauction::MechanismConfig;
using dpauction::Scenario;
using nlohmann::json;

constexpr int kExitAuditFailed = 1;
constexpr int kExitError = 2;

struct MechanismFlags {
  std::string variant = "dpam";
  double epsilon = 1.0;
  double granularity = 0.1;
  uint64_t seed = 0;
  uint64_t max_scored_vectors = dpauction::kDefaultMaxScoredVectors;

  void Register(CLI::App* app) {
    app->add_option("--variant", variant, "dpam, dtam, dpam_s or dtam_s")
        ->capture_default_str();
    app->add_option("--epsilon", epsilon, "privacy budget")
        ->capture_default_str();
    app->add_option("--granularity", granularity, "price grid spacing")
        ->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--max-scored-vectors", max_scored_vectors,
                    "cap on scored price vectors")
        ->capture_default_str();
  }

  MechanismConfig Config(const Scenario& scenario) const {
    return MechanismConfig{
        .epsilon = epsilon,
        .grid = dpauction::PriceGrid(scenario.bounds.c_min,
                                     scenario.bounds.c_max, granularity),
        .seed = seed,
        .variant = dpauction::ParseVariant(variant),
        .max_scored_vectors = max_scored_vectors,
    };
  }
};

// Scenarios named on the command line, or an oracle-scale corpus.
struct CorpusFlags {
  std::vector<std::string> files;
  int corpus = 0;
  uint64_t corpus_seed = 1;

  void Register(CLI::App* app) {
    app->add_option("--scenario", files, "scenario files");
    app->add_option("--corpus", corpus,
                    "generate this many oracle-scale scenarios instead");
    app->add_option("--corpus-seed", corpus_seed, "seed of the corpus")
        ->capture_default_str();
  }

  std::vector<Scenario> Load() const {
    std::vector<Scenario> scenarios;
    for (const auto& file : files) {
      scenarios.push_back(dpauction::LoadScenario(file));
    }
    for (int s = 0; s < corpus; ++s) {
      scenarios.push_back(dpauction::Generate(dpauction::OracleScaleParams(
          dpauction::DeriveSeed(corpus_seed, s))));
    }
    if (scenarios.empty()) {
      throw dpauction::ArgumentError("give --scenario files or --corpus N");
    }
    return scenarios;
  }
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  for (char c : text) {
    if (c == ',') {
      if (!item.empty()) items.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item += c;
    }
  }
  if (!item.empty()) items.push_back(item);
  return items;
}

int ReportAudit(const AuditReport& report, bool verbose) {
  std::cout << report.Summary() << "\n";
  if (verbose || !report.passed()) {
    std::cout << "worst case: " << report.worst_case << "\n";
  }
  return report.passed() ? 0 : kExitAuditFailed;
}

json OutcomeToJson(const dpauction::AuctionOutcome& outcome) {
  json assignment = json::array();
  for (const auto& a : outcome.allocation.assignment) {
    assignment.push_back(a.has_value() ? json(*a) : json(nullptr));
  }
  return {{"price", outcome.price},
          {"assignment", assignment},
          {"buyer_utilities", outcome.buyer_utilities},
          {"seller_utilities", outcome.seller_utilities},
          {"revenue", outcome.revenue}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private double auction for edge resources"};
  app.set_version_flag("--version", dpauction::CodeVersion());
  app.require_subcommand(1);
  int status = 0;

  // run
  auto* run = app.add_subcommand("run", "run a parameter sweep");
  std::string sweep = "granularity";
  std::string values;
  std::string variants = "dpam,dtam,dpam_s,dtam_s";
  std::string out;
  std::string format = "csv";
  bool mask_timing = false;
  dpauction::SweepSpec spec;
  run->add_option("--sweep", sweep, "granularity, k, m or epsilon")
      ->capture_default_str();
  run->add_option("--values", values, "comma-separated swept values")
      ->required();
  run->add_option("--m", spec.generator.m, "buyers")->capture_default_str();
  run->add_option("--n", spec.generator.n, "sellers")->capture_default_str();
  run->add_option("--k", spec.generator.k, "resource types")
      ->capture_default_str();
  run->add_option("--granularity", spec.granularity, "price grid spacing")
      ->capture_default_str();
  run->add_option("--epsilon", spec.epsilon, "privacy budget")
      ->capture_default_str();
  run->add_option("--trials", spec.trials, "trials per cell")
      ->capture_default_str();
  run->add_option("--seed", spec.seed, "base seed")->capture_default_str();
  run->add_option("--variants", variants, "comma-separated variants")
      ->capture_default_str();
  run->add_option("--max-scored-vectors", spec.max_scored_vectors,
                  "cap on jointly scored price vectors")
      ->capture_default_str();
  run->add_option("--out", out, "results file (stdout when omitted)");
  run->add_option("--format", format, "csv or tsv")->capture_default_str();
  run->add_flag("--mask-timing", mask_timing,
                "write 'masked' in the running_time_s column");
  run->callback([&] {
    spec.parameter = dpauction::ParseSweepParameter(sweep);
    spec.values.clear();
    for (const auto& item : SplitList(values)) {
      spec.values.push_back(std::stod(item));
    }
    spec.variants.clear();
    for (const auto& item : SplitList(variants)) {
      spec.variants.push_back(dpauction::ParseVariant(item));
    }
    const dpauction::EmitOptions options{
        .format = dpauction::ParseResultsFormat(format),
        .mask_timing = mask_timing};
    const auto rows = dpauction::RunSweep(spec);
    if (out.empty()) {
      std::cout << dpauction::FormatResults(rows, options);
    } else {
      dpauction::EmitResults(rows, spec, out, options);
    }
  });

  // scenario gen|validate
  auto* scenario_cmd = app.add_subcommand("scenario", "scenario files");
  scenario_cmd->require_subcommand(1);
  auto* gen = scenario_cmd->add_subcommand("gen", "generate a scenario");
  dpauction::GeneratorParams params;
  std::string gen_out;
  bool oracle_scale = false;
  gen->add_option("--m", params.m, "buyers")->capture_default_str();
  gen->add_option("--n", params.n, "sellers")->capture_default_str();
  gen->add_option("--k", params.k, "resource types")->capture_default_str();
  gen->add_option("--seed", params.seed, "seed")->capture_default_str();
  gen->add_flag("--oracle-scale", oracle_scale,
                "draw m, n, k at oracle scale from the seed");
  gen->add_option("--out", gen_out, "output file (stdout when omitted)");
  gen->callback([&] {
    const auto p = oracle_scale ? dpauction::OracleScaleParams(params.seed)
                                : params;
    const Scenario s = dpauction::Generate(p);
    if (gen_out.empty()) {
      std::cout << dpauction::SerializeScenario(s);
    } else {
      dpauction::SaveScenario(s, gen_out);
    }
  });
  auto* validate = scenario_cmd->add_subcommand("validate", "check a file");
  std::string validate_path;
  validate->add_option("file", validate_path, "scenario file")->required();
  validate->callback([&] {
    const Scenario s = dpauction::LoadScenario(validate_path);
    std::cout << "valid: m=" << s.num_buyers() << " n=" << s.num_sellers()
              << " k=" << s.k << "\n";
  });

  // auction
  auto* auction = app.add_subcommand("auction", "run one mechanism");
  std::string auction_path;
  MechanismFlags auction_flags;
  auction->add_option("file", auction_path, "scenario file")->required();
  auction_flags.Register(auction);
  auction->callback([&] {
    const Scenario s = dpauction::LoadScenario(auction_path);
    const auto outcome =
        dpauction::RunMechanism(s, auction_flags.Config(s));
    std::cout << OutcomeToJson(outcome).dump(2) << "\n";
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "brute-force references");
  std::string oracle_path;
  MechanismFlags oracle_flags;
  oracle->add_option("file", oracle_path, "scenario file")->required();
  oracle_flags.Register(oracle);
  oracle->callback([&] {
    const Scenario s = dpauction::LoadScenario(oracle_path);
    const auto r = dpauction::EvaluateOracle(s, oracle_flags.Config(s));
    const json doc = {{"opt", r.opt},
                      {"opt_star", r.opt_star},
                      {"f_theta", r.f_theta},
                      {"bound_dpam", r.bound_dpam},
                      {"bound_dpam_s", r.bound_dpam_s}};
    std::cout << doc.dump(2) << "\n";
  });

  // audit dp|truthfulness|ir
  auto* audit = app.add_subcommand("audit", "property audits");
  audit->require_subcommand(1);
  bool verbose = false;
  audit->add_flag("--verbose", verbose, "print the worst case");

  auto* dp = audit->add_subcommand("dp", "exact differential-privacy audit");
  CorpusFlags dp_corpus;
  MechanismFlags dp_flags;
  dp_flags.granularity = 0.5;
  int neighbors = 10;
  dp_corpus.Register(dp);
  dp_flags.Register(dp);
  dp->add_option("--neighbors", neighbors, "neighbors per scenario")
      ->capture_default_str();
  dp->callback([&] {
    AuditReport total;
    const auto scenarios = dp_corpus.Load();
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      total.Merge(dpauction::AuditDp(scenarios[s], dp_flags.Config(scenarios[s]),
                                     neighbors,
                                     dpauction::DeriveSeed(dp_flags.seed, s)));
    }
    status = ReportAudit(total, verbose);
  });

  auto* truth = audit->add_subcommand("truthfulness", "truthfulness audit");
  CorpusFlags truth_corpus;
  MechanismFlags truth_flags;
  truth_flags.granularity = 0.5;
  std::string mode = "fixed";
  truth_corpus.Register(truth);
  truth_flags.Register(truth);
  truth->add_option("--mode", mode, "fixed (every grid price) or expected")
      ->capture_default_str();
  truth->callback([&] {
    AuditReport total;
    const auto deviations = dpauction::DefaultDeviationGrid();
    for (const Scenario& s : truth_corpus.Load()) {
      const MechanismConfig config = truth_flags.Config(s);
      if (mode == "fixed") {
        for (const auto& price : dpauction::PriceProduct(config.grid, s.k)) {
          total.Merge(
              dpauction::AuditTruthfulnessFixedPrice(s, price, deviations));
        }
      } else if (mode == "expected") {
        total.Merge(
            dpauction::AuditTruthfulnessExpected(s, config, deviations));
      } else {
        throw dpauction::ArgumentError("--mode must be fixed or expected");
      }
    }
    status = ReportAudit(total, verbose);
  });

  auto* ir = audit->add_subcommand("ir", "individual rationality and budget");
  CorpusFlags ir_corpus;
  MechanismFlags ir_flags;
  ir_corpus.Register(ir);
  ir_flags.Register(ir);
  ir->callback([&] {
    const auto scenarios = ir_corpus.Load();
    // Bounds are shared by generated corpora; take the grid from the first.
    status = ReportAudit(
        dpauction::AuditIrBudget(scenarios, ir_flags.Config(scenarios.front())),
        verbose);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return status;
}
