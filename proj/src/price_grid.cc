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

#include "dpauction/price_grid.h"

#include <cmath>
#include <limits>
#include <string>

#include "dpauction/errors.h"

namespace dpauction {

PriceGrid::PriceGrid(double c_min, double c_max, double granularity)
    : c_min_(c_min), c_max_(c_max), granularity_(granularity) {
  if (!(granularity > 0.0) || !std::isfinite(granularity)) {
    throw ArgumentError("granularity must be > 0");
  }
  if (!(c_max >= c_min) || !std::isfinite(c_min) || !std::isfinite(c_max)) {
    throw ArgumentError("price domain must satisfy c_min <= c_max");
  }
  const double span = c_max - c_min;
  const double steps = std::round(span / granularity);
  exact_ = std::abs(steps * granularity - span) <= 1e-12;
  const double whole = exact_ ? steps : std::floor(span / granularity);
  if (whole + 1.0 >
      static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
    throw CapacityError("price grid has too many levels");
  }
  levels_ = static_cast<std::size_t>(whole) + 1;
}

double PriceGrid::Point(std::size_t t) const {
  if (t >= levels_) {
    throw ArgumentError("grid level " + std::to_string(t) + " out of range");
  }
  if (exact_ && t + 1 == levels_) return c_max_;
  return c_min_ + static_cast<double>(t) * granularity_;
}

std::vector<double> PriceGrid::Points() const {
  std::vector<double> points(levels_);
  for (std::size_t t = 0; t < levels_; ++t) points[t] = Point(t);
  return points;
}

uint64_t ProductSize(const PriceGrid& grid, int k) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  const uint64_t levels = grid.levels();
  uint64_t size = 1;
  for (int z = 0; z < k; ++z) {
    if (size > std::numeric_limits<uint64_t>::max() / levels) {
      throw CapacityError("levels^k = " + std::to_string(levels) + "^" +
                          std::to_string(k) + " overflows a 64-bit index");
    }
    size *= levels;
  }
  return size;
}

PriceProduct::PriceProduct(PriceGrid grid, int k)
    : grid_(grid), k_(k), size_(ProductSize(grid, k)) {}

std::vector<std::size_t> PriceProduct::Digits(uint64_t index) const {
  if (index >= size_) throw ArgumentError("product index out of range");
  std::vector<std::size_t> digits(k_);
  const uint64_t levels = grid_.levels();
  for (int z = k_ - 1; z >= 0; --z) {
    digits[z] = static_cast<std::size_t>(index % levels);
    index /= levels;
  }
  return digits;
}

PriceVector PriceProduct::At(uint64_t index) const {
  const auto digits = Digits(index);
  PriceVector price(k_);
  for (int z = 0; z < k_; ++z) price[z] = grid_.Point(digits[z]);
  return price;
}

PriceProduct::Iterator PriceProduct::IteratorAt(uint64_t index) const {
  if (index > size_) throw ArgumentError("product index out of range");
  return Iterator(&grid_, k_, index);
}

PriceProduct::Iterator::Iterator(const PriceGrid* grid, int k, uint64_t index)
    : grid_(grid), index_(index), digits_(k), current_(k) {
  const uint64_t levels = grid->levels();
  uint64_t rest = index;
  for (int z = k - 1; z >= 0; --z) {
    digits_[z] = static_cast<std::size_t>(rest % levels);
    rest /= levels;
  }
  // `rest` is nonzero only for the end sentinel; its vector is never read.
  for (int z = 0; z < k; ++z) current_[z] = grid->Point(digits_[z]);
}

PriceProduct::Iterator& PriceProduct::Iterator::operator++() {
  ++index_;
  const std::size_t levels = grid_->levels();
  for (int z = static_cast<int>(digits_.size()) - 1; z >= 0; --z) {
    if (++digits_[z] < levels) {
      current_[z] = grid_->Point(digits_[z]);
      return *this;
    }
    digits_[z] = 0;
    current_[z] = grid_->Point(0);
  }
  return *this;
}

}  // namespace dpauction
