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

#ifndef DPAUCTION_ERRORS_H_
#define DPAUCTION_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace dpauction {

// Invalid argument to a public operation (index out of range, bad parameter).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested enumeration does not fit the configured budget or the index
// type. Raised instead of wrapping around.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed scenario or results document. `line` is 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, std::string field = "")
      : std::runtime_error(what), line_(line), field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

class VersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpauction

#endif  // DPAUCTION_ERRORS_H_
