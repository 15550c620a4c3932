// Copyright 2026 The slasim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "slasim/time_types.hpp"

#include <cctype>
#include <cstdio>

#include "slasim/errors.hpp"

namespace slasim {

Duration parse_duration(const std::string& text, const std::string& field_path,
                        bool require_positive) {
  std::size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
  }
  if (i == 0) {
    throw SchemaError(field_path, "expected a duration like \"90s\", got \"" +
                                      text + "\"");
  }
  if (i > 15) {
    throw SchemaError(field_path, "duration out of range: \"" + text + "\"");
  }
  Duration value = std::stoll(text.substr(0, i));
  const std::string unit = text.substr(i);
  if (unit == "ms" || unit.empty()) {
    // value already in milliseconds
  } else if (unit == "s") {
    value *= kSecond;
  } else if (unit == "m") {
    value *= kMinute;
  } else if (unit == "h") {
    value *= kHour;
  } else {
    throw SchemaError(field_path,
                      "unknown duration unit \"" + unit + "\" in \"" + text +
                          "\" (use ms, s, m or h)");
  }
  if (require_positive && value <= 0) {
    throw SchemaError(field_path, "duration must be positive: \"" + text + "\"");
  }
  return value;
}

std::string format_hms(Duration d) {
  std::string sign;
  if (d < 0) {
    sign = "-";
    d = -d;
  }
  const std::int64_t ms = d % kSecond;
  const std::int64_t total_s = d / kSecond;
  char buf[64];
  if (ms == 0) {
    std::snprintf(buf, sizeof(buf), "%s%lld:%02lld:%02lld", sign.c_str(),
                  static_cast<long long>(total_s / 3600),
                  static_cast<long long>((total_s / 60) % 60),
                  static_cast<long long>(total_s % 60));
  } else {
    std::snprintf(buf, sizeof(buf), "%s%lld:%02lld:%02lld.%03lld", sign.c_str(),
                  static_cast<long long>(total_s / 3600),
                  static_cast<long long>((total_s / 60) % 60),
                  static_cast<long long>(total_s % 60),
                  static_cast<long long>(ms));
  }
  return buf;
}

std::string format_usd(Money m) {
  std::string sign;
  if (m < 0) {
    sign = "-";
    m = -m;
  }
  const std::int64_t dollars = m / kUsd;
  const std::int64_t micros = m % kUsd;
  char buf[64];
  if (micros % 10000 == 0) {
    std::snprintf(buf, sizeof(buf), "US$ %s%lld.%02lld", sign.c_str(),
                  static_cast<long long>(dollars),
                  static_cast<long long>(micros / 10000));
    return buf;
  }
  std::snprintf(buf, sizeof(buf), "US$ %s%lld.%06lld", sign.c_str(),
                static_cast<long long>(dollars),
                static_cast<long long>(micros));
  std::string out = buf;
  while (out.back() == '0') out.pop_back();
  return out;
}

}  // namespace slasim
