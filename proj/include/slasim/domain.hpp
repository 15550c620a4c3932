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
#include <string>
#include <vector>

#include "slasim/time_types.hpp"

namespace slasim {

enum class TaskStatus { Pending, Running, Done, Failed, Cancelled };

struct Task {
  TaskId task_id = 0;
  JobId job_id = 0;
  // User-supplied at submission, then refreshed from observed completions.
  Duration estimated_runtime = 0;
  // Ground truth consumed by the simulator; the scheduler never reads it
  // before completion.
  Duration actual_runtime = 0;
  TaskStatus status = TaskStatus::Pending;
  WorkerId worker_id = -1;   // valid while Running
  SimTime started_at = -1;   // valid while Running
  SimTime finished_at = -1;  // valid once Done
  int attempts = 0;          // dispatch count
};

// Job lifecycle states. Submitted is the pre-admission start state; admission
// moves a job to QoS (deadline jobs) or Queued (regular jobs).
enum class JobState {
  Submitted,
  QoS,
  Queued,
  Underprovisioned,
  Provisioned,
  Unfeasible,
  Finished,
};

enum class FinishReason { Completed, FailedJob, CancelledJob };

enum class JobTrigger {
  Admit,
  NoCapacity,
  DeadlineAtRisk,
  DeadlineSafe,
  DeadlineImpossible,
  AllTasksDone,
  TaskFailedFatally,
  Cancel,
  EarlyCompletionRecovery,
};

const char* to_string(JobState s);
const char* to_string(FinishReason r);
const char* to_string(JobTrigger t);
const char* to_string(TaskStatus s);

struct Job {
  JobId job_id = 0;
  std::vector<Task> tasks;
  std::optional<SimTime> deadline;  // absolute; present iff qos
  SimTime submitted_at = 0;
  JobState state = JobState::Submitted;
  bool qos = false;
  std::optional<SimTime> finished_at;
  std::optional<FinishReason> finish_reason;

  bool finished() const { return state == JobState::Finished; }
};

// The legal edge set of the job state machine. Returns the successor state,
// or nullopt for a pair outside the table. Edges into the deadline states are
// restricted to QoS jobs.
std::optional<JobState> legal_transition(JobState from, bool qos,
                                         JobTrigger trigger);

// Applies a trigger, setting finished_at / finish_reason on the three
// finishing triggers. Throws IllegalTransitionError outside the edge table.
JobState transition(Job& job, JobTrigger trigger, SimTime now);

// Count of tasks with status Pending or Running.
int remaining_tasks(const Job& job);
// Count of tasks with status Pending.
int pending_tasks(const Job& job);

enum class WorkerOrigin { Static, Dynamic };

// Failed is terminal: the worker takes no further tasks. A failed dynamic
// worker is decommissioned (and its lease closed) at its next billing
// boundary; a failed static worker simply leaves the fleet.
enum class WorkerStatus { Booting, Idle, Busy, Decommissioned, Failed };

const char* to_string(WorkerOrigin o);
const char* to_string(WorkerStatus s);

// Single-slot execution resource. Static workers exist for the whole run and
// are never decommissioned; dynamic workers are leased from a pool with a
// boot delay and a billing period.
struct Worker {
  WorkerId worker_id = 0;
  WorkerOrigin origin = WorkerOrigin::Static;
  PoolId pool_id = -1;  // Dynamic only
  WorkerStatus status = WorkerStatus::Idle;
  TaskId running_task = -1;  // valid while Busy
  JobId running_job = -1;    // valid while Busy
  SimTime lease_start = 0;   // Dynamic: acquisition request instant
  SimTime ready_at = 0;      // Dynamic: lease_start + pool boot delay
  bool releasable = false;   // Dynamic only; scheduled to leave its job
  std::optional<JobId> bound_job;  // QoS job whose request acquired it

  bool is_dynamic() const { return origin == WorkerOrigin::Dynamic; }
  bool can_run_tasks() const {
    return status == WorkerStatus::Idle || status == WorkerStatus::Busy;
  }
};

struct ResourcePool {
  PoolId pool_id = 0;
  Duration boot_delay = 0;
  Duration billing_period = 0;
  Money price_per_period = 0;
  int max_instances = 0;
  int acquired_count = 0;

  int headroom() const { return max_instances - acquired_count; }
};

}  // namespace slasim
