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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dpauction/errors.h"
#include "dpauction/random.h"

namespace dpauction {

using nlohmann::json;

namespace {

void CheckRange(const Range& range, const char* name) {
  if (!(range.lo <= range.hi)) {
    throw ArgumentError(std::string(name) + " range must satisfy lo <= hi");
  }
}

ResourceVector DrawVector(Rng& rng, int k, const Range& range) {
  ResourceVector values(k);
  for (double& v : values) v = rng.Uniform(range.lo, range.hi);
  return values;
}

// --- JSON reading with path context ---

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw ParseError("scenario field " + path + ": " + what, 0, path);
}

const json& Field(const json& object, const std::string& path,
                  const char* key) {
  if (!object.is_object()) Fail(path, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) Fail(path + "/" + key, "missing");
  return *it;
}

double ReadReal(const json& value, const std::string& path) {
  if (!value.is_number()) Fail(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) Fail(path, "expected a finite number");
  return v;
}

int ReadInt(const json& value, const std::string& path) {
  if (!value.is_number_integer()) Fail(path, "expected an integer");
  return value.get<int>();
}

ResourceVector ReadVector(const json& value, const std::string& path) {
  if (!value.is_array()) Fail(path, "expected an array");
  ResourceVector out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(ReadReal(value[i], path + "/" + std::to_string(i)));
  }
  return out;
}

std::optional<Point> ReadPosition(const json& object,
                                  const std::string& path) {
  const auto it = object.find("position");
  if (it == object.end() || it->is_null()) return std::nullopt;
  const ResourceVector xy = ReadVector(*it, path + "/position");
  if (xy.size() != 2) Fail(path + "/position", "expected [x, y]");
  return Point{xy[0], xy[1]};
}

json PositionToJson(const std::optional<Point>& position) {
  if (!position.has_value()) return nullptr;
  return json::array({position->x, position->y});
}

int LineOfByte(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + end,
                                         '\n'));
}

}  // namespace

void CheckGeneratorParams(const GeneratorParams& params) {
  if (params.m < 1 || params.n < 1 || params.k < 1) {
    throw ArgumentError("m, n and k must be >= 1");
  }
  if (!(params.region_side > 0.0)) {
    throw ArgumentError("region side must be > 0");
  }
  CheckRange(params.d_range, "demand");
  CheckRange(params.h_range, "supply");
  CheckRange(params.c_range, "ask");
  CheckRange(params.dm_range, "max distance");
  CheckRange(params.bid_noise, "bid noise");
  if (!(params.dm_range.lo > 0.0)) {
    throw ArgumentError("max distance range must be positive");
  }
}

Scenario Generate(const GeneratorParams& params) {
  CheckGeneratorParams(params);
  Scenario scenario;
  scenario.k = params.k;
  const double k = params.k;
  scenario.bounds = MarketBounds{
      .c_min = params.c_range.lo,
      .c_max = params.c_range.hi,
      .v_min = 0.5 * k * params.d_range.lo * params.bid_noise.lo,
      .v_max = 0.5 * k * params.d_range.hi * params.bid_noise.hi,
      .d_min = params.d_range.lo,
      .d_max = params.d_range.hi,
      .h_min = params.h_range.lo,
      .h_max = params.h_range.hi,
  };

  Rng seller_rng(DeriveSeed(params.seed, 0));
  for (int j = 0; j < params.n; ++j) {
    Seller seller;
    seller.id = j;
    const double x = seller_rng.Uniform(0.0, params.region_side);
    const double y = seller_rng.Uniform(0.0, params.region_side);
    seller.position = Point{x, y};
    seller.supply = DrawVector(seller_rng, params.k, params.h_range);
    seller.ask = DrawVector(seller_rng, params.k, params.c_range);
    seller.cost = seller.ask;
    scenario.sellers.push_back(std::move(seller));
  }

  Rng buyer_rng(DeriveSeed(params.seed, 1));
  for (int i = 0; i < params.m; ++i) {
    Buyer buyer;
    buyer.id = i;
    const double x = buyer_rng.Uniform(0.0, params.region_side);
    const double y = buyer_rng.Uniform(0.0, params.region_side);
    buyer.position = Point{x, y};
    buyer.demand = DrawVector(buyer_rng, params.k, params.d_range);
    buyer.max_distance =
        buyer_rng.Uniform(params.dm_range.lo, params.dm_range.hi);
    const double noise =
        buyer_rng.Uniform(params.bid_noise.lo, params.bid_noise.hi);
    // Clamp against rounding at the range ends.
    buyer.bid = std::clamp(0.5 * TotalDemand(buyer) * noise,
                           scenario.bounds.v_min, scenario.bounds.v_max);
    buyer.valuation = buyer.bid;
    scenario.buyers.push_back(std::move(buyer));
  }

  scenario.distances.assign(params.m, std::vector<double>(params.n));
  for (int i = 0; i < params.m; ++i) {
    const Point& b = *scenario.buyers[i].position;
    for (int j = 0; j < params.n; ++j) {
      const Point& s = *scenario.sellers[j].position;
      scenario.distances[i][j] = std::hypot(b.x - s.x, b.y - s.y);
    }
  }
  return scenario;
}

GeneratorParams OracleScaleParams(uint64_t seed) {
  Rng rng(DeriveSeed(seed, 2));
  GeneratorParams params;
  params.m = 1 + static_cast<int>(rng.UniformIndex(6));
  params.n = 1 + static_cast<int>(rng.UniformIndex(3));
  params.k = 1 + static_cast<int>(rng.UniformIndex(2));
  params.seed = seed;
  return params;
}

json ScenarioToJson(const Scenario& scenario) {
  const MarketBounds& b = scenario.bounds;
  json doc;
  doc["format"] = kScenarioFormatName;
  doc["version"] = kScenarioFormatVersion;
  doc["k"] = scenario.k;
  doc["bounds"] = {{"c_min", b.c_min}, {"c_max", b.c_max},
                   {"v_min", b.v_min}, {"v_max", b.v_max},
                   {"d_min", b.d_min}, {"d_max", b.d_max},
                   {"h_min", b.h_min}, {"h_max", b.h_max}};
  json buyers = json::array();
  for (const Buyer& buyer : scenario.buyers) {
    buyers.push_back({{"id", buyer.id},
                      {"demand", buyer.demand},
                      {"bid", buyer.bid},
                      {"valuation", buyer.valuation},
                      {"max_distance", buyer.max_distance},
                      {"position", PositionToJson(buyer.position)}});
  }
  doc["buyers"] = std::move(buyers);
  json sellers = json::array();
  for (const Seller& seller : scenario.sellers) {
    sellers.push_back({{"id", seller.id},
                       {"supply", seller.supply},
                       {"ask", seller.ask},
                       {"cost", seller.cost},
                       {"position", PositionToJson(seller.position)}});
  }
  doc["sellers"] = std::move(sellers);
  doc["distances"] = scenario.distances;
  return doc;
}

Scenario ScenarioFromJson(const json& doc) {
  const json& format = Field(doc, "", "format");
  if (!format.is_string() || format.get<std::string>() != kScenarioFormatName) {
    Fail("/format", std::string("expected \"") + kScenarioFormatName + "\"");
  }
  const int version = ReadInt(Field(doc, "", "version"), "/version");
  if (version != kScenarioFormatVersion) {
    throw VersionError("scenario format version " + std::to_string(version) +
                       " is not supported (expected " +
                       std::to_string(kScenarioFormatVersion) + ")");
  }

  Scenario scenario;
  scenario.k = ReadInt(Field(doc, "", "k"), "/k");
  const json& bounds = Field(doc, "", "bounds");
  auto bound = [&bounds](const char* key) {
    return ReadReal(Field(bounds, "/bounds", key),
                    std::string("/bounds/") + key);
  };
  scenario.bounds = MarketBounds{
      .c_min = bound("c_min"), .c_max = bound("c_max"),
      .v_min = bound("v_min"), .v_max = bound("v_max"),
      .d_min = bound("d_min"), .d_max = bound("d_max"),
      .h_min = bound("h_min"), .h_max = bound("h_max"),
  };

  const json& buyers = Field(doc, "", "buyers");
  if (!buyers.is_array()) Fail("/buyers", "expected an array");
  for (std::size_t i = 0; i < buyers.size(); ++i) {
    const std::string path = "/buyers/" + std::to_string(i);
    const json& item = buyers[i];
    Buyer buyer;
    buyer.id = ReadInt(Field(item, path, "id"), path + "/id");
    buyer.demand = ReadVector(Field(item, path, "demand"), path + "/demand");
    buyer.bid = ReadReal(Field(item, path, "bid"), path + "/bid");
    buyer.valuation =
        ReadReal(Field(item, path, "valuation"), path + "/valuation");
    buyer.max_distance =
        ReadReal(Field(item, path, "max_distance"), path + "/max_distance");
    buyer.position = ReadPosition(item, path);
    scenario.buyers.push_back(std::move(buyer));
  }

  const json& sellers = Field(doc, "", "sellers");
  if (!sellers.is_array()) Fail("/sellers", "expected an array");
  for (std::size_t j = 0; j < sellers.size(); ++j) {
    const std::string path = "/sellers/" + std::to_string(j);
    const json& item = sellers[j];
    Seller seller;
    seller.id = ReadInt(Field(item, path, "id"), path + "/id");
    seller.supply = ReadVector(Field(item, path, "supply"), path + "/supply");
    seller.ask = ReadVector(Field(item, path, "ask"), path + "/ask");
    seller.cost = ReadVector(Field(item, path, "cost"), path + "/cost");
    seller.position = ReadPosition(item, path);
    scenario.sellers.push_back(std::move(seller));
  }

  const json& distances = Field(doc, "", "distances");
  if (!distances.is_array()) Fail("/distances", "expected an array");
  for (std::size_t i = 0; i < distances.size(); ++i) {
    scenario.distances.push_back(
        ReadVector(distances[i], "/distances/" + std::to_string(i)));
  }

  const auto problems = ValidateScenario(scenario);
  if (!problems.empty()) {
    throw ParseError("invalid scenario: " + problems.front());
  }
  return scenario;
}

std::string SerializeScenario(const Scenario& scenario) {
  return ScenarioToJson(scenario).dump(2) + "\n";
}

Scenario ParseScenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = LineOfByte(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("scenario syntax error at line " + std::to_string(line) +
                         ": " + e.what(),
                     line);
  }
  return ScenarioFromJson(doc);
}

void SaveScenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << SerializeScenario(scenario);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseScenario(text.str());
}

}  // namespace dpauction
