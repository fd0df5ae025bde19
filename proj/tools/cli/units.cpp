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

#include "units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

#include "rbsim/su2.hpp"

namespace rbsim::cli {
namespace {

using UnitTable = std::array<std::pair<std::string_view, double>, 5>;

constexpr UnitTable kTimeUnits{{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"\xC2\xB5s", 1e-6},
                               {"ns", 1e-9}}};
constexpr UnitTable kFrequencyUnits{{{"rad/s", 1.0},
                                    {"Hz", kTwoPi},
                                    {"kHz", kTwoPi * 1e3},
                                    {"MHz", kTwoPi * 1e6},
                                    {"krad/s", 1e3}}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dim, std::string_view field) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end == text.data()) {
    throw ConfigError(field, "expected a number with a unit, got '" + std::string(text) + "'");
  }
  const std::string_view unit = trim(text.substr(static_cast<std::size_t>(end - text.data())));
  const UnitTable& table = dim == Dimension::kTime ? kTimeUnits : kFrequencyUnits;
  const char* expected = dim == Dimension::kTime ? "s, ms, us, ns" : "rad/s, krad/s, Hz, kHz, MHz";
  if (unit.empty()) {
    throw ConfigError(field, "missing unit in '" + std::string(text) + "' (expected " +
                                 expected + ")");
  }
  for (const auto& [name, scale] : table) {
    if (unit == name) {
      if (!std::isfinite(value)) throw ConfigError(field, "value is not finite");
      return value * scale;
    }
  }
  throw ConfigError(field, "unknown unit '" + std::string(unit) + "' (expected " + expected + ")");
}

std::string format_quantity(double value, Dimension dim) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g %s", value, dim == Dimension::kTime ? "s" : "rad/s");
  return buf;
}

}  // namespace rbsim::cli
