// Copyright 2026 The slasim Authors.
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

// Independent reference implementations used to cross-check the production
// scheduler. These are deliberately written with different data structures
// than the library code so that a shared bug is unlikely.

#ifndef SLASIM_TESTS_ORACLE_HPP_
#define SLASIM_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "slasim/time_types.hpp"

namespace slasim::oracle {

// Greedy list schedule: every task takes the earliest-free slot. Slots that
// are free in the past start at `now`. Returns the instant the last task
// finishes, clamped from below by `floor` when `has_floor` is set. With no
// slots and tasks left the schedule never completes.
inline SimTime list_schedule(const std::vector<SimTime>& free_at, int tasks,
                             Duration per_task, SimTime now, SimTime floor = 0,
                             bool has_floor = false) {
  if (tasks > 0 && free_at.empty()) return std::numeric_limits<SimTime>::max();
  std::multiset<SimTime> slots(free_at.begin(), free_at.end());
  SimTime last = now;
  for (int i = 0; i < tasks; ++i) {
    auto it = slots.begin();
    SimTime start = std::max(*it, now);
    slots.erase(it);
    SimTime end = start + per_task;
    slots.insert(end);
    last = std::max(last, end);
  }
  if (has_floor) last = std::max(last, floor);
  return last;
}

// Smallest number of extra slots, each becoming free at now + boot_delay,
// that brings the list schedule within the deadline. Returns -1 when no
// count up to `cap` works.
inline int min_extra(const std::vector<SimTime>& base, int tasks,
                     Duration per_task, SimTime now, SimTime deadline,
                     Duration boot_delay, int cap, SimTime floor = 0,
                     bool has_floor = false) {
  for (int n = 1; n <= cap; ++n) {
    std::vector<SimTime> slots = base;
    for (int i = 0; i < n; ++i) slots.push_back(now + boot_delay);
    if (list_schedule(slots, tasks, per_task, now, floor, has_floor) <=
        deadline) {
      return n;
    }
  }
  return -1;
}

// Running mean with ties rounded up, computed through a different formula
// than the production estimator.
inline Duration mean_round_half_up(const std::vector<Duration>& samples) {
  std::int64_t sum = 0;
  for (Duration s : samples) sum += s;
  std::int64_t count = static_cast<std::int64_t>(samples.size());
  return (2 * sum + count) / (2 * count);
}

}  // namespace slasim::oracle

#endif  // SLASIM_TESTS_ORACLE_HPP_
