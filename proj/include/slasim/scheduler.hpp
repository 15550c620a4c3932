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

#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "slasim/domain.hpp"
#include "slasim/snapshot.hpp"

namespace slasim {

enum class ProvisioningPolicy { CostOptimization, TimeOptimization };

const char* to_string(ProvisioningPolicy p);

struct RequestResources {
  JobId job_id;
  int count;
  PoolId pool_id;
};
struct ReleaseResources {
  std::vector<WorkerId> worker_ids;
};
struct DispatchTask {
  JobId job_id;
  TaskId task_id;
  WorkerId worker_id;
};
struct SetJobState {
  JobId job_id;
  JobTrigger trigger;
};
using SchedulerAction =
    std::variant<RequestResources, ReleaseResources, DispatchTask, SetJobState>;

enum class RejectReason {
  ExpiredDeadline,
  NoTasks,
  BadEstimate,
  UnfeasibleAtSubmission,
};

const char* to_string(RejectReason r);

struct AdmitResult {
  bool admitted = false;
  JobState initial_state = JobState::Queued;  // meaningful when admitted
  std::optional<RejectReason> reason;
};

// What prompted a scheduling evaluation: the two triggers of the provisioning
// algorithm plus resource arrivals (boot completions, failures, shortfalls),
// which re-run the same feasibility calculus without a new runtime sample.
enum class EvaluateCause { JobArrival, TaskFinish, ResourceChange };

// The SLA allocator brain: admission, runtime-estimate refinement,
// completion-time estimation by greedy list-schedule dry run, provisioning
// decisions, QoS-priority dispatch, and release selection. Pure decision
// functions over snapshots; the only internal state is per-job estimate
// history.
class SchedulerCore {
 public:
  // Workers usable by one job in a dry run: per-worker instants at which each
  // becomes free for the job, plus a floor from its already-running tasks.
  struct AvailabilityProfile {
    std::vector<SimTime> capacity;  // next-free instants, unsorted
    SimTime running_floor = 0;      // latest estimated end of a running task
    bool has_running = false;
  };

  AvailabilityProfile availability(const Job& job,
                                   const ClusterSnapshot& snap) const;

  // Accept or reject a job at submission. Registers accepted jobs (and their
  // user estimate) in the estimate history. Throws DuplicateJobError on a
  // job_id seen before.
  AdmitResult examine_and_admit(const Job& job, const ClusterSnapshot& snap,
                                const PoolView& pool, bool strict);

  // Folds one observed completion into the job's runtime estimate (arithmetic
  // mean of observed completions; the user estimate is fully displaced by the
  // first sample). Applies the refreshed estimate to all non-Done tasks and
  // returns it.
  Duration update_estimate(Job& job, Duration actual_runtime);

  // Current per-task estimate: mean of observed completions, or the user
  // estimate before any completion.
  Duration current_estimate(const Job& job) const;

  // Makespan of a deterministic greedy list-schedule dry run of the job's
  // pending tasks over the workers currently available to it, plus
  // hypothetical_extra phantom workers that become available one boot delay
  // from now. Busy workers join as capacity when their running task's
  // estimate expires, and every running task floors the result. Throws
  // NoWorkersError when the job has no workers, no phantoms, and pending
  // work.
  SimTime estimate_completion(const Job& job, const ClusterSnapshot& snap,
                              int hypothetical_extra,
                              const PoolView& pool) const;

  // Completion estimate with some workers pretended absent (decommission and
  // release what-ifs). Jobs with no remaining workers report SimTime max
  // instead of throwing.
  SimTime completion_excluding(const Job& job, const ClusterSnapshot& snap,
                               const std::vector<WorkerId>& excluded,
                               const PoolView& pool) const;

  // Extra workers to request for a QoS job whose current completion estimate
  // misses its deadline. CostOptimization: smallest n whose dry run meets the
  // deadline (ascending search capped by remaining tasks and pool headroom);
  // nullopt when no allowed n works. TimeOptimization: maximal useful
  // parallelism, min(remaining - assigned, headroom); nullopt when <= 0.
  std::optional<int> required_extra(const Job& job,
                                    const ClusterSnapshot& snap,
                                    const PoolView& pool,
                                    ProvisioningPolicy policy) const;

  // One provisioning-algorithm evaluation: completion estimate,
  // request/release decisions, state-change actions, then a global dispatch
  // round. Returns the ordered action list; the caller applies it. The caller
  // must refresh the runtime estimate (update_estimate) before building
  // `snap`, since busy projections in the snapshot derive from task
  // estimates; `estimate_changed` reports whether that refresh moved the
  // estimate and gates the surplus-release check.
  std::vector<SchedulerAction> on_job_event(EvaluateCause cause, Job& job,
                                            const ClusterSnapshot& snap,
                                            const PoolView& pool,
                                            ProvisioningPolicy policy,
                                            bool estimate_changed = false);

  // Greedy matching of queued tasks to idle workers. QoS-class tasks beat
  // regular tasks; FIFO within a class; workers preferred in order bound-to-
  // the-job, then static/unbound, then reusable others, ascending id.
  // newly_released marks workers released earlier in the same action list.
  std::vector<DispatchTask> dispatch(
      const ClusterSnapshot& snap,
      const std::vector<WorkerId>& newly_released = {}) const;

  // Picks `count` dynamic workers bound to the job for release: Idle (or
  // Booting) before Busy, then most time consumed in the current billing
  // period, then ascending id.
  std::vector<WorkerId> select_releasable(const Job& job,
                                          const ClusterSnapshot& snap,
                                          int count) const;

  bool knows(JobId id) const { return estimates_.count(id) != 0; }

 private:
  struct EstimateState {
    Duration user_estimate = 0;
    std::int64_t observed_sum = 0;
    std::int64_t observed_count = 0;
    Duration current = 0;
  };

  AvailabilityProfile availability_for(
      const Job& job, const ClusterSnapshot& snap,
      const std::set<WorkerId>& exclude = {}) const;

  // estimate_completion that reports "no workers at all" as +infinity instead
  // of throwing, and supports excluding workers (release what-ifs).
  SimTime completion_or_max(const Job& job, const ClusterSnapshot& snap,
                            int hypothetical_extra, const PoolView& pool,
                            const std::set<WorkerId>& exclude = {}) const;

  std::vector<WorkerId> release_candidates(const Job& job,
                                           const ClusterSnapshot& snap) const;

  // Workers to let go after an estimate drop, largest set the deadline
  // survives (cost) or idle workers beyond one per remaining task (time).
  std::vector<WorkerId> surplus_release(const Job& job,
                                        const ClusterSnapshot& snap,
                                        const PoolView& pool,
                                        ProvisioningPolicy policy) const;

  bool has_idle_eligible_worker(const Job& job,
                                const ClusterSnapshot& snap) const;

  int assigned_worker_count(const Job& job, const ClusterSnapshot& snap) const;

  std::map<JobId, EstimateState> estimates_;
};

}  // namespace slasim
