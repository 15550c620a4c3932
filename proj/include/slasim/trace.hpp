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

#include <filesystem>
#include <string>
#include <vector>

#include "slasim/config.hpp"
#include "slasim/time_types.hpp"

namespace slasim {

// One events.csv row. Column order is frozen: time,kind,job,task,worker,detail
// with -1 rendered as an empty cell. Kinds in use: job_submitted,
// job_rejected, state_change, task_dispatch, task_finish, task_requeued,
// job_finished, job_cancelled, acquire, boot_complete, billing_boundary,
// release, rebind, unbind, decommission, worker_failure, sim_end.
struct TraceRow {
  SimTime time = 0;
  std::string kind;
  JobId job = -1;
  TaskId task = -1;
  WorkerId worker = -1;
  std::string detail;

  bool operator==(const TraceRow&) const = default;
};

std::string to_csv_line(const TraceRow& row);
void write_events_csv(const std::filesystem::path& path,
                      const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_events_csv(const std::filesystem::path& path);

// Totals recomputed from a trace alone, used to cross-check summary.json.
struct ReplayTotals {
  int dynamic_workers_acquired = 0;
  Money extra_cost = 0;
  Money static_cost = 0;
  Money shared_cost = 0;
  SimTime makespan = 0;
  SimTime drained_at = 0;
};

// Rebuilds lease and binding timelines from acquire / rebind / unbind /
// release / decommission rows and re-bills every lease from the price
// schedule, ignoring any cost figures embedded in row details. Throws
// SimFault on a malformed trace (decommission without acquire, lease end off
// a billing boundary).
ReplayTotals replay_totals(const std::vector<TraceRow>& rows,
                           const ClusterConfig& config);

}  // namespace slasim
