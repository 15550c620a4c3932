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

#pragma once

#include <cstdint>
#include <string>

namespace slasim {

// Virtual time since simulation start, in integer milliseconds. Integer
// millisecond resolution keeps every quantity in the model (task runtimes,
// deadlines, billing periods) exactly representable.
using SimTime = std::int64_t;
using Duration = std::int64_t;

// Money in integer micro-dollars (1 USD == 1,000,000).
using Money = std::int64_t;

using JobId = std::int32_t;
using TaskId = std::int32_t;
using WorkerId = std::int32_t;
using PoolId = std::int32_t;
using EventId = std::int64_t;

constexpr Duration kMillisecond = 1;
constexpr Duration kSecond = 1000;
constexpr Duration kMinute = 60 * kSecond;
constexpr Duration kHour = 60 * kMinute;
constexpr Duration kDay = 24 * kHour;

constexpr Money kMicroUsd = 1;
constexpr Money kUsd = 1000000;

constexpr Duration seconds(std::int64_t n) { return n * kSecond; }
constexpr Duration minutes(std::int64_t n) { return n * kMinute; }
constexpr Duration hours(std::int64_t n) { return n * kHour; }

// Parses "90s", "2m", "1h", "500ms", or a bare millisecond count.
// Throws SchemaError on malformed input or a non-positive result when
// require_positive is set.
Duration parse_duration(const std::string& text, const std::string& field_path,
                        bool require_positive = true);

// "H:MM:SS" wall-style rendering of a virtual duration (e.g. 2490000 -> "0:41:30").
std::string format_hms(Duration d);

// "US$ 0.17" style rendering; two decimals minimum, more only when the
// micro-dollar amount is not a whole cent.
std::string format_usd(Money m);

}  // namespace slasim
