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

#include "slasim/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

#include "slasim/errors.hpp"

namespace slasim {

namespace {

constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

bool is_live(const WorkerView& w) {
  return w.status == WorkerStatus::Booting || w.status == WorkerStatus::Idle ||
         w.status == WorkerStatus::Busy;
}

}  // namespace

const char* to_string(ProvisioningPolicy p) {
  return p == ProvisioningPolicy::CostOptimization ? "cost" : "time";
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::ExpiredDeadline: return "ExpiredDeadline";
    case RejectReason::NoTasks: return "NoTasks";
    case RejectReason::BadEstimate: return "BadEstimate";
    case RejectReason::UnfeasibleAtSubmission: return "UnfeasibleAtSubmission";
  }
  return "?";
}

SchedulerCore::AvailabilityProfile SchedulerCore::availability(
    const Job& job, const ClusterSnapshot& snap) const {
  return availability_for(job, snap);
}

SchedulerCore::AvailabilityProfile SchedulerCore::availability_for(
    const Job& job, const ClusterSnapshot& snap,
    const std::set<WorkerId>& exclude) const {
  AvailabilityProfile out;
  for (const auto& w : snap.workers) {
    if (!is_live(w)) continue;
    // A running task of this job bounds the job's completion from below even
    // on workers that are leaving (released or excluded by a what-if).
    if (w.status == WorkerStatus::Busy && w.busy_job == job.job_id) {
      out.running_floor = std::max(out.running_floor, w.busy_until);
      out.has_running = true;
    }
    if (exclude.count(w.worker_id) != 0) continue;
    if (w.releasable) continue;
    if (w.bound_job && *w.bound_job == job.job_id) {
      switch (w.status) {
        case WorkerStatus::Booting:
          out.capacity.push_back(w.ready_at);
          break;
        case WorkerStatus::Idle:
          out.capacity.push_back(snap.now);
          break;
        case WorkerStatus::Busy:
          out.capacity.push_back(w.busy_until);
          break;
        default:
          break;
      }
      continue;
    }
    if (w.bound_job) continue;  // committed to another job
    if (w.status == WorkerStatus::Idle) {
      out.capacity.push_back(snap.now);
    } else if (w.status == WorkerStatus::Busy && w.busy_job == job.job_id) {
      out.capacity.push_back(w.busy_until);
    }
  }
  return out;
}

SimTime SchedulerCore::completion_or_max(const Job& job,
                                         const ClusterSnapshot& snap,
                                         int hypothetical_extra,
                                         const PoolView& pool,
                                         const std::set<WorkerId>& exclude) const {
  AvailabilityProfile prof = availability_for(job, snap, exclude);
  const int pending = pending_tasks(job);
  std::priority_queue<SimTime, std::vector<SimTime>, std::greater<>> free_at(
      prof.capacity.begin(), prof.capacity.end());
  for (int i = 0; i < hypothetical_extra; ++i) {
    free_at.push(snap.now + pool.boot_delay);
  }
  if (pending > 0 && free_at.empty()) return kNever;
  const Duration est = current_estimate(job);
  SimTime last_end = snap.now;
  for (int i = 0; i < pending; ++i) {
    const SimTime start = std::max(free_at.top(), snap.now);
    free_at.pop();
    const SimTime end = start + est;
    last_end = std::max(last_end, end);
    free_at.push(end);
  }
  if (prof.has_running) last_end = std::max(last_end, prof.running_floor);
  return last_end;
}

SimTime SchedulerCore::estimate_completion(const Job& job,
                                           const ClusterSnapshot& snap,
                                           int hypothetical_extra,
                                           const PoolView& pool) const {
  const SimTime c = completion_or_max(job, snap, hypothetical_extra, pool);
  if (c == kNever) {
    throw NoWorkersError("job " + std::to_string(job.job_id) +
                         ": pending tasks with no workers and no phantoms");
  }
  return c;
}

SimTime SchedulerCore::completion_excluding(const Job& job,
                                            const ClusterSnapshot& snap,
                                            const std::vector<WorkerId>& excluded,
                                            const PoolView& pool) const {
  const std::set<WorkerId> ex(excluded.begin(), excluded.end());
  return completion_or_max(job, snap, 0, pool, ex);
}

AdmitResult SchedulerCore::examine_and_admit(const Job& job,
                                             const ClusterSnapshot& snap,
                                             const PoolView& pool, bool strict) {
  if (knows(job.job_id)) {
    throw DuplicateJobError("job " + std::to_string(job.job_id) +
                            " submitted twice");
  }
  if (job.tasks.empty()) {
    return {false, JobState::Submitted, RejectReason::NoTasks};
  }
  const Duration user_est = job.tasks.front().estimated_runtime;
  if (user_est <= 0) {
    return {false, JobState::Submitted, RejectReason::BadEstimate};
  }
  if (job.qos) {
    if (!job.deadline || *job.deadline <= snap.now) {
      return {false, JobState::Submitted, RejectReason::ExpiredDeadline};
    }
    if (strict) {
      const int best = std::min(pending_tasks(job), pool.headroom);
      const SimTime c =
          completion_or_max(job, snap, std::max(best, 0), pool);
      if (c > *job.deadline) {
        return {false, JobState::Submitted,
                RejectReason::UnfeasibleAtSubmission};
      }
    }
  }
  EstimateState st;
  st.user_estimate = user_est;
  st.current = user_est;
  estimates_.emplace(job.job_id, st);
  return {true, job.qos ? JobState::QoS : JobState::Queued, std::nullopt};
}

Duration SchedulerCore::current_estimate(const Job& job) const {
  auto it = estimates_.find(job.job_id);
  if (it != estimates_.end()) return it->second.current;
  return job.tasks.empty() ? 0 : job.tasks.front().estimated_runtime;
}

Duration SchedulerCore::update_estimate(Job& job, Duration actual_runtime) {
  auto it = estimates_.find(job.job_id);
  if (it == estimates_.end()) {
    EstimateState st;
    st.user_estimate = job.tasks.empty() ? actual_runtime
                                         : job.tasks.front().estimated_runtime;
    st.current = st.user_estimate;
    it = estimates_.emplace(job.job_id, st).first;
  }
  EstimateState& st = it->second;
  st.observed_sum += actual_runtime;
  st.observed_count += 1;
  st.current = (st.observed_sum + st.observed_count / 2) / st.observed_count;
  for (auto& t : job.tasks) {
    if (t.status == TaskStatus::Pending || t.status == TaskStatus::Running) {
      t.estimated_runtime = st.current;
    }
  }
  return st.current;
}

int SchedulerCore::assigned_worker_count(const Job& job,
                                         const ClusterSnapshot& snap) const {
  return static_cast<int>(availability_for(job, snap).capacity.size());
}

std::optional<int> SchedulerCore::required_extra(const Job& job,
                                                 const ClusterSnapshot& snap,
                                                 const PoolView& pool,
                                                 ProvisioningPolicy policy) const {
  if (!job.deadline) return std::nullopt;
  if (policy == ProvisioningPolicy::TimeOptimization) {
    const int want = remaining_tasks(job) - assigned_worker_count(job, snap);
    const int n = std::min(want, pool.headroom);
    if (n <= 0) return std::nullopt;
    return n;
  }
  const int cap = std::min(pending_tasks(job), pool.headroom);
  for (int n = 1; n <= cap; ++n) {
    if (completion_or_max(job, snap, n, pool) <= *job.deadline) return n;
  }
  return std::nullopt;
}

std::vector<WorkerId> SchedulerCore::release_candidates(
    const Job& job, const ClusterSnapshot& snap) const {
  struct Cand {
    WorkerId id;
    bool busy;
    Duration elapsed_in_period;
  };
  std::vector<Cand> cands;
  for (const auto& w : snap.workers) {
    if (w.origin != WorkerOrigin::Dynamic || !is_live(w)) continue;
    if (w.releasable) continue;
    if (!w.bound_job || *w.bound_job != job.job_id) continue;
    const Duration period =
        snap.find_pool(w.pool_id) ? snap.find_pool(w.pool_id)->billing_period : 1;
    cands.push_back({w.worker_id, w.status == WorkerStatus::Busy,
                     (snap.now - w.lease_start) % period});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.busy != b.busy) return !a.busy;  // idle and booting leave first
    if (a.elapsed_in_period != b.elapsed_in_period) {
      return a.elapsed_in_period > b.elapsed_in_period;  // closest to paid-up
    }
    return a.id < b.id;
  });
  std::vector<WorkerId> out;
  out.reserve(cands.size());
  for (const auto& c : cands) out.push_back(c.id);
  return out;
}

std::vector<WorkerId> SchedulerCore::select_releasable(
    const Job& job, const ClusterSnapshot& snap, int count) const {
  std::vector<WorkerId> all = release_candidates(job, snap);
  if (static_cast<int>(all.size()) > count) all.resize(std::max(count, 0));
  return all;
}

bool SchedulerCore::has_idle_eligible_worker(const Job& job,
                                             const ClusterSnapshot& snap) const {
  for (const auto& w : snap.workers) {
    if (w.status != WorkerStatus::Idle) continue;
    if (w.origin == WorkerOrigin::Static) return true;
    if (w.releasable) continue;
    if (!w.bound_job || *w.bound_job == job.job_id) return true;
    const JobView* other = snap.find_job(*w.bound_job);
    if (other && other->state == JobState::Finished) return true;
  }
  return false;
}

std::vector<DispatchTask> SchedulerCore::dispatch(
    const ClusterSnapshot& snap,
    const std::vector<WorkerId>& newly_released) const {
  const std::set<WorkerId> released(newly_released.begin(),
                                    newly_released.end());
  auto leaving = [&](const WorkerView& w) {
    return w.releasable || released.count(w.worker_id) != 0;
  };

  std::vector<QueuedTaskView> tasks = snap.queued;
  std::sort(tasks.begin(), tasks.end(),
            [](const QueuedTaskView& a, const QueuedTaskView& b) {
              if (a.qos != b.qos) return a.qos;  // QoS class first
              if (a.job_submitted_at != b.job_submitted_at) {
                return a.job_submitted_at < b.job_submitted_at;
              }
              if (a.job_id != b.job_id) return a.job_id < b.job_id;
              return a.task_id < b.task_id;
            });

  // Queue pressure per job, used to decide whether a worker bound to another
  // job may be borrowed.
  std::map<JobId, int> unassigned;
  for (const auto& t : tasks) unassigned[t.job_id] += 1;

  std::set<WorkerId> used;
  std::vector<DispatchTask> out;
  for (const auto& t : tasks) {
    const WorkerView* best = nullptr;
    int best_rank = 3;
    for (const auto& w : snap.workers) {
      if (w.status != WorkerStatus::Idle || used.count(w.worker_id) != 0) {
        continue;
      }
      int rank;
      if (w.origin == WorkerOrigin::Dynamic && w.bound_job &&
          *w.bound_job == t.job_id && !leaving(w)) {
        rank = 0;
      } else if (w.origin == WorkerOrigin::Static ||
                 (!w.bound_job && !leaving(w))) {
        rank = 1;
      } else if (w.origin == WorkerOrigin::Dynamic && w.bound_job &&
                 *w.bound_job != t.job_id) {
        // Borrowing another job's worker: fine once that job is done or the
        // worker is leaving it; a QoS task may also borrow from a job with
        // nothing left to place.
        const JobView* owner = snap.find_job(*w.bound_job);
        const bool owner_done =
            owner == nullptr || owner->state == JobState::Finished;
        const bool owner_idle_queue = unassigned[*w.bound_job] == 0;
        if (owner_done || leaving(w) || (t.qos && owner_idle_queue)) {
          rank = 2;
        } else {
          continue;
        }
      } else {
        continue;
      }
      if (rank < best_rank ||
          (best && rank == best_rank && w.worker_id < best->worker_id)) {
        best = &w;
        best_rank = rank;
      }
    }
    if (!best) continue;
    used.insert(best->worker_id);
    unassigned[t.job_id] -= 1;
    out.push_back({t.job_id, t.task_id, best->worker_id});
  }
  return out;
}

std::vector<SchedulerAction> SchedulerCore::on_job_event(
    EvaluateCause /*cause*/, Job& job, const ClusterSnapshot& snap,
    const PoolView& pool, ProvisioningPolicy policy, bool estimate_changed) {
  std::vector<SchedulerAction> actions;
  std::vector<WorkerId> released_now;
  if (job.qos && !job.finished()) {
    const SimTime deadline = *job.deadline;
    const SimTime completion = completion_or_max(job, snap, 0, pool);
    if (completion > deadline) {
      const auto req = required_extra(job, snap, pool, policy);
      if (job.state == JobState::Unfeasible) {
        bool recover = false;
        if (req) {
          recover = policy == ProvisioningPolicy::CostOptimization ||
                    completion_or_max(job, snap, *req, pool) <= deadline;
        }
        if (recover) {
          actions.push_back(SetJobState{job.job_id,
                                        JobTrigger::EarlyCompletionRecovery});
          actions.push_back(SetJobState{job.job_id, JobTrigger::DeadlineAtRisk});
          actions.push_back(RequestResources{job.job_id, *req, pool.pool_id});
        }
      } else if (req) {
        actions.push_back(SetJobState{job.job_id, JobTrigger::DeadlineAtRisk});
        actions.push_back(RequestResources{job.job_id, *req, pool.pool_id});
      } else {
        if (job.state != JobState::Underprovisioned) {
          actions.push_back(SetJobState{job.job_id, JobTrigger::DeadlineAtRisk});
        }
        actions.push_back(
            SetJobState{job.job_id, JobTrigger::DeadlineImpossible});
      }
    } else {
      if (job.state == JobState::Unfeasible) {
        actions.push_back(
            SetJobState{job.job_id, JobTrigger::EarlyCompletionRecovery});
        actions.push_back(SetJobState{job.job_id, JobTrigger::DeadlineSafe});
      } else {
        if (estimate_changed) {
          released_now = surplus_release(job, snap, pool, policy);
          if (!released_now.empty()) {
            actions.push_back(ReleaseResources{released_now});
          }
        }
        if (job.state == JobState::QoS &&
            !has_idle_eligible_worker(job, snap)) {
          actions.push_back(SetJobState{job.job_id, JobTrigger::NoCapacity});
        } else if (job.state != JobState::Provisioned) {
          actions.push_back(SetJobState{job.job_id, JobTrigger::DeadlineSafe});
        }
      }
    }
  }

  for (const auto& d : dispatch(snap, released_now)) actions.push_back(d);
  return actions;
}

std::vector<WorkerId> SchedulerCore::surplus_release(
    const Job& job, const ClusterSnapshot& snap, const PoolView& pool,
    ProvisioningPolicy policy) const {
  const std::vector<WorkerId> cands = release_candidates(job, snap);
  if (cands.empty()) return {};
  const SimTime deadline = *job.deadline;
  if (policy == ProvisioningPolicy::TimeOptimization) {
    // Only workers beyond one-per-remaining-task are surplus, and only idle
    // ones leave immediately.
    int surplus = assigned_worker_count(job, snap) - remaining_tasks(job);
    if (surplus <= 0) return {};
    std::vector<WorkerId> idle;
    for (WorkerId id : cands) {
      const WorkerView* w = snap.find_worker(id);
      if (w && w->status != WorkerStatus::Busy) idle.push_back(id);
    }
    if (static_cast<int>(idle.size()) > surplus) idle.resize(surplus);
    while (!idle.empty()) {
      if (completion_excluding(job, snap, idle, pool) <= deadline) return idle;
      idle.pop_back();
    }
    return {};
  }
  // Cost policy: drop the longest prefix of candidates the deadline survives.
  std::vector<WorkerId> drop = cands;
  while (!drop.empty()) {
    if (completion_excluding(job, snap, drop, pool) <= deadline) return drop;
    drop.pop_back();
  }
  return {};
}

}  // namespace slasim
