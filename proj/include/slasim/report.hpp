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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slasim/accounting.hpp"
#include "slasim/config.hpp"
#include "slasim/domain.hpp"
#include "slasim/trace.hpp"

namespace slasim {

struct JobOutcome {
  JobId job_id = 0;
  bool qos = false;
  JobState final_state = JobState::Submitted;
  SimTime submitted_at = 0;
  std::optional<SimTime> deadline_at;
  std::optional<SimTime> finished_at;
  std::optional<FinishReason> finish_reason;
  std::optional<bool> sla_met;
  int tasks_total = 0;
  int tasks_done = 0;
};

struct WorkerOutcome {
  WorkerId worker_id = 0;
  WorkerOrigin origin = WorkerOrigin::Static;
  PoolId pool_id = 0;
  SimTime lease_start = 0;
  std::optional<SimTime> lease_end;
  std::int64_t billed_periods = 0;
  Money cost = 0;
  WorkerStatus final_status = WorkerStatus::Idle;
};

struct RunTotals {
  SimTime makespan = 0;    // latest job finish, 0 when nothing finished
  SimTime drained_at = 0;  // time of the last processed event
  int dynamic_workers_acquired = 0;
  Money extra_cost = 0;   // dynamic leases, every billed period
  Money static_cost = 0;  // owned fleet valued at default-pool prices
  Money shared_cost = 0;  // slice of extra_cost owed by no job
  int jobs_total = 0;
  int jobs_finished = 0;
  int jobs_rejected = 0;
  int qos_met = 0;
  int qos_missed = 0;
};

struct RunReport {
  ClusterConfig config;
  std::uint64_t seed = 0;
  RunTotals totals;
  std::vector<JobOutcome> jobs;
  std::vector<WorkerOutcome> workers;
  std::map<JobId, Money> cost_by_job;  // kSharedAccount key for shared
  std::vector<TraceRow> events;
};

std::string summary_json_text(const RunReport& report);
void write_summary_json(const std::filesystem::path& path,
                        const RunReport& report);
void write_jobs_csv(const std::filesystem::path& path, const RunReport& report);
void write_workers_csv(const std::filesystem::path& path,
                       const RunReport& report);

}  // namespace slasim
