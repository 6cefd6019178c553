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

#ifndef DPAUCTION_PRICE_GRID_H_
#define DPAUCTION_PRICE_GRID_H_

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <vector>

#include "dpauction/market.h"

namespace dpauction {

// The discretized price domain: c_min + t * granularity for t in [0, levels).
// Both endpoints are included when the interval is an exact multiple of the
// granularity; otherwise the last level is the largest point below c_max.
class PriceGrid {
 public:
  // Throws ArgumentError when granularity <= 0 or c_max < c_min.
  PriceGrid(double c_min, double c_max, double granularity);

  double c_min() const { return c_min_; }
  double c_max() const { return c_max_; }
  double granularity() const { return granularity_; }
  std::size_t levels() const { return levels_; }

  // The t-th grid point. The top level of an exact grid is c_max itself.
  double Point(std::size_t t) const;
  std::vector<double> Points() const;

  friend bool operator==(const PriceGrid&, const PriceGrid&) = default;

 private:
  double c_min_;
  double c_max_;
  double granularity_;
  std::size_t levels_;
  bool exact_;
};

// levels^k, or CapacityError when it does not fit in uint64_t.
uint64_t ProductSize(const PriceGrid& grid, int k);

// Lexicographically ordered view of grid^k (first coordinate most
// significant). Vectors are decoded on the fly; nothing is materialized.
// Sub-ranges [first, last) of the index space are independent and may be
// consumed concurrently.
class PriceProduct {
 public:
  class Iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = PriceVector;
    using difference_type = std::ptrdiff_t;
    using pointer = const PriceVector*;
    using reference = const PriceVector&;

    Iterator() = default;
    Iterator(const PriceGrid* grid, int k, uint64_t index);

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    Iterator& operator++();
    Iterator operator++(int) {
      Iterator copy = *this;
      ++*this;
      return copy;
    }
    uint64_t index() const { return index_; }

    friend bool operator==(const Iterator& a, const Iterator& b) {
      return a.index_ == b.index_;
    }

   private:
    const PriceGrid* grid_ = nullptr;
    uint64_t index_ = 0;
    std::vector<std::size_t> digits_;
    PriceVector current_;
  };

  // Throws ArgumentError when k < 1 and CapacityError on overflow.
  PriceProduct(PriceGrid grid, int k);

  uint64_t size() const { return size_; }
  int k() const { return k_; }
  const PriceGrid& grid() const { return grid_; }

  // Vector at lexicographic position `index`.
  PriceVector At(uint64_t index) const;
  // Grid level of each coordinate of the vector at `index`.
  std::vector<std::size_t> Digits(uint64_t index) const;

  Iterator begin() const { return Iterator(&grid_, k_, 0); }
  Iterator end() const { return Iterator(&grid_, k_, size_); }
  Iterator IteratorAt(uint64_t index) const;

 private:
  PriceGrid grid_;
  int k_;
  uint64_t size_;
};

}  // namespace dpauction

#endif  // DPAUCTION_PRICE_GRID_H_
