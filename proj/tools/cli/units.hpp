// Copyright 2026 The rbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "rbsim/errors.hpp"

namespace rbsim::cli {

/// Bad configuration value. The message always names the field.
class ConfigError : public InvalidInput {
 public:
  ConfigError(std::string_view field, std::string_view what)
      : InvalidInput("config field '" + std::string(field) + "': " + std::string(what)),
        field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Dimension {
  kTime,              ///< s, ms, us, ns
  kAngularFrequency,  ///< rad/s; Hz, kHz, MHz are multiplied by 2 pi
};

/// Parses "<number> <unit>" (space optional) into SI. A missing or unknown
/// unit is an error: physical quantities never default their unit.
double parse_quantity(std::string_view text, Dimension dim, std::string_view field);

/// Round-trippable rendering in the SI unit, e.g. "0.0001 s".
std::string format_quantity(double value, Dimension dim);

}  // namespace rbsim::cli
