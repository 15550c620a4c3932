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

#include <optional>
#include <vector>

#include "slasim/domain.hpp"

namespace slasim {

// Read-only per-worker view at a single instant.
struct WorkerView {
  WorkerId worker_id = 0;
  WorkerOrigin origin = WorkerOrigin::Static;
  PoolId pool_id = -1;
  WorkerStatus status = WorkerStatus::Idle;
  SimTime ready_at = 0;
  SimTime lease_start = 0;
  bool releasable = false;
  std::optional<JobId> bound_job;
  JobId busy_job = -1;     // job of the running task, Busy only
  TaskId busy_task = -1;   // running task, Busy only
  SimTime busy_until = 0;  // estimate-based end of the running task, Busy only
};

struct QueuedTaskView {
  JobId job_id = 0;
  TaskId task_id = 0;
  bool qos = false;
  SimTime job_submitted_at = 0;
};

struct JobView {
  JobId job_id = 0;
  bool qos = false;
  JobState state = JobState::Submitted;
  std::optional<SimTime> deadline;
  SimTime submitted_at = 0;
};

struct PoolView {
  PoolId pool_id = 0;
  Duration boot_delay = 0;
  Duration billing_period = 0;
  Money price_per_period = 0;
  int headroom = 0;
};

// Consistent cluster view at one instant; input to every scheduling decision.
struct ClusterSnapshot {
  SimTime now = 0;
  std::vector<WorkerView> workers;
  std::vector<QueuedTaskView> queued;  // Pending tasks of unfinished jobs
  std::vector<JobView> jobs;
  std::vector<PoolView> pools;

  const PoolView* find_pool(PoolId id) const {
    for (const auto& p : pools) {
      if (p.pool_id == id) return &p;
    }
    return nullptr;
  }
  const WorkerView* find_worker(WorkerId id) const {
    for (const auto& w : workers) {
      if (w.worker_id == id) return &w;
    }
    return nullptr;
  }
  const JobView* find_job(JobId id) const {
    for (const auto& j : jobs) {
      if (j.job_id == id) return &j;
    }
    return nullptr;
  }
};

}  // namespace slasim
