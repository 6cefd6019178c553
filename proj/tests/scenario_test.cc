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

#include "dpauction/scenario.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "dpauction/errors.h"
#include "test_util.h"

namespace dpauction {
namespace {

GeneratorParams DefaultScale(uint64_t seed) {
  GeneratorParams params;
  params.m = 100;
  params.n = 10;
  params.k = 3;
  params.seed = seed;
  return params;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TEST(GenerateTest, SameSeedSameScenario) {
  EXPECT_EQ(Generate(DefaultScale(4)), Generate(DefaultScale(4)));
  EXPECT_EQ(SerializeScenario(Generate(DefaultScale(4))),
            SerializeScenario(Generate(DefaultScale(4))));
  EXPECT_NE(Generate(DefaultScale(4)), Generate(DefaultScale(5)));
}

TEST(GenerateTest, RangesAtDefaultScale) {
  const Scenario s = Generate(DefaultScale(6));
  EXPECT_TRUE(ValidateScenario(s).empty());
  EXPECT_DOUBLE_EQ(s.bounds.v_min, 1.05);
  EXPECT_DOUBLE_EQ(s.bounds.v_max, 9.75);
  ASSERT_EQ(s.num_buyers(), 100u);
  ASSERT_EQ(s.num_sellers(), 10u);
  for (const Buyer& b : s.buyers) {
    EXPECT_GE(b.bid, 1.05);
    EXPECT_LE(b.bid, 9.75);
    EXPECT_EQ(b.valuation, b.bid);
    double total = 0.0;
    for (double d : b.demand) {
      EXPECT_GE(d, 1.0);
      EXPECT_LE(d, 5.0);
      total += d;
    }
    EXPECT_GE(b.bid, 0.5 * total * 0.7 - 1e-12);
    EXPECT_LE(b.bid, 0.5 * total * 1.3 + 1e-12);
    EXPECT_GE(b.max_distance, 200.0 * std::sqrt(2.0) - 1e-9);
    EXPECT_LE(b.max_distance, 1000.0 * std::sqrt(2.0) + 1e-9);
    ASSERT_TRUE(b.position.has_value());
    EXPECT_GE(b.position->x, 0.0);
    EXPECT_LE(b.position->y, 1000.0);
  }
  for (const Seller& seller : s.sellers) {
    EXPECT_EQ(seller.cost, seller.ask);
    for (int z = 0; z < 3; ++z) {
      EXPECT_GE(seller.supply[z], 10.0);
      EXPECT_LE(seller.supply[z], 20.0);
      EXPECT_GE(seller.ask[z], 0.0);
      EXPECT_LE(seller.ask[z], 1.0);
    }
  }
}

TEST(GenerateTest, SampleMeans) {
  GeneratorParams params;
  params.m = 10000;
  params.n = 10000;
  params.k = 1;
  params.seed = 8;
  const Scenario s = Generate(params);
  double demand = 0.0, supply = 0.0;
  for (const Buyer& b : s.buyers) demand += b.demand[0];
  for (const Seller& seller : s.sellers) supply += seller.supply[0];
  const double n = 10000.0;
  // Uniform on an interval of width w has standard deviation w / sqrt(12).
  EXPECT_NEAR(demand / n, 3.0, 3.0 * 4.0 / std::sqrt(12.0 * n));
  EXPECT_NEAR(supply / n, 15.0, 3.0 * 10.0 / std::sqrt(12.0 * n));
}

TEST(GenerateTest, LargerMarketsExtendSmallerOnes) {
  GeneratorParams small = DefaultScale(9);
  small.m = 50;
  const Scenario a = Generate(small);
  const Scenario b = Generate(DefaultScale(9));
  EXPECT_EQ(a.sellers, b.sellers);
  for (std::size_t i = 0; i < a.num_buyers(); ++i) {
    EXPECT_EQ(a.buyers[i], b.buyers[i]);
    EXPECT_EQ(a.distances[i], b.distances[i]);
  }
}

TEST(GenerateTest, RejectsBadParams) {
  GeneratorParams params;
  params.m = 0;
  EXPECT_THROW(Generate(params), ArgumentError);
  params = GeneratorParams();
  params.d_range = {5.0, 1.0};
  EXPECT_THROW(Generate(params), ArgumentError);
}

TEST(OracleScaleParamsTest, StaysSmall) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const GeneratorParams p = OracleScaleParams(seed);
    EXPECT_GE(p.m, 1);
    EXPECT_LE(p.m, 6);
    EXPECT_GE(p.n, 1);
    EXPECT_LE(p.n, 3);
    EXPECT_TRUE(p.k == 1 || p.k == 2);
  }
}

TEST(SerializationTest, RoundTripIsExact) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Scenario s = Generate(DefaultScale(seed));
    EXPECT_EQ(ParseScenario(SerializeScenario(s)), s);
  }
}

TEST(SerializationTest, SaveAndLoad) {
  const auto path =
      std::filesystem::temp_directory_path() / "dpauction_scenario_test.json";
  const Scenario s = Generate(DefaultScale(12));
  SaveScenario(s, path);
  EXPECT_EQ(LoadScenario(path), s);
  std::filesystem::remove(path);
  EXPECT_THROW(LoadScenario(path), std::runtime_error);
}

TEST(SerializationTest, T1Fixture) {
  EXPECT_EQ(LoadScenario(testing::TestDataPath("t1_scenario.json")),
            testing::T1());
}

TEST(SerializationTest, TruncatedFileReportsLine) {
  try {
    ParseScenario(ReadFile(testing::TestDataPath("truncated_scenario.json")));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 13);
  }
}

TEST(SerializationTest, BadFieldReportsPath) {
  std::string text = ReadFile(testing::TestDataPath("t1_scenario.json"));
  text.replace(text.find("\"bid\": 1.5"), 10, "\"bid\": \"x\"");
  try {
    ParseScenario(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "/buyers/0/bid");
  }
  std::string missing = ReadFile(testing::TestDataPath("t1_scenario.json"));
  missing.replace(missing.find("\"k\": 1,"), 7, "");
  try {
    ParseScenario(missing);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "/k");
  }
}

TEST(SerializationTest, VersionAndFormatChecks) {
  EXPECT_THROW(ParseScenario(ReadFile(
                   testing::TestDataPath("future_version_scenario.json"))),
               VersionError);
  std::string text = ReadFile(testing::TestDataPath("t1_scenario.json"));
  text.replace(text.find("dpauction.scenario"), 18, "other.format");
  EXPECT_THROW(ParseScenario(text), ParseError);
}

TEST(SerializationTest, InvalidContentIsRejected) {
  std::string text = ReadFile(testing::TestDataPath("t1_scenario.json"));
  text.replace(text.find("\"ask\": [0.4]"), 12, "\"ask\": [1.4]");
  EXPECT_THROW(ParseScenario(text), ParseError);
}

}  // namespace
}  // namespace dpauction
