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

#include "slasim/domain.hpp"

#include "slasim/errors.hpp"

namespace slasim {

const char* to_string(JobState s) {
  switch (s) {
    case JobState::Submitted: return "Submitted";
    case JobState::QoS: return "QoS";
    case JobState::Queued: return "Queued";
    case JobState::Underprovisioned: return "Underprovisioned";
    case JobState::Provisioned: return "Provisioned";
    case JobState::Unfeasible: return "Unfeasible";
    case JobState::Finished: return "Finished";
  }
  return "?";
}

const char* to_string(FinishReason r) {
  switch (r) {
    case FinishReason::Completed: return "Completed";
    case FinishReason::FailedJob: return "Failed";
    case FinishReason::CancelledJob: return "Cancelled";
  }
  return "?";
}

const char* to_string(JobTrigger t) {
  switch (t) {
    case JobTrigger::Admit: return "Admit";
    case JobTrigger::NoCapacity: return "NoCapacity";
    case JobTrigger::DeadlineAtRisk: return "DeadlineAtRisk";
    case JobTrigger::DeadlineSafe: return "DeadlineSafe";
    case JobTrigger::DeadlineImpossible: return "DeadlineImpossible";
    case JobTrigger::AllTasksDone: return "AllTasksDone";
    case JobTrigger::TaskFailedFatally: return "TaskFailedFatally";
    case JobTrigger::Cancel: return "Cancel";
    case JobTrigger::EarlyCompletionRecovery: return "EarlyCompletionRecovery";
  }
  return "?";
}

const char* to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::Pending: return "Pending";
    case TaskStatus::Running: return "Running";
    case TaskStatus::Done: return "Done";
    case TaskStatus::Failed: return "Failed";
    case TaskStatus::Cancelled: return "Cancelled";
  }
  return "?";
}

const char* to_string(WorkerOrigin o) {
  return o == WorkerOrigin::Static ? "static" : "dynamic";
}

const char* to_string(WorkerStatus s) {
  switch (s) {
    case WorkerStatus::Booting: return "Booting";
    case WorkerStatus::Idle: return "Idle";
    case WorkerStatus::Busy: return "Busy";
    case WorkerStatus::Decommissioned: return "Decommissioned";
    case WorkerStatus::Failed: return "Failed";
  }
  return "?";
}

std::optional<JobState> legal_transition(JobState from, bool qos,
                                         JobTrigger trigger) {
  using S = JobState;
  using T = JobTrigger;
  // Jobs without a deadline never visit the provisioning states, so for them
  // only admission and the job-ending triggers exist.
  if (!qos && from != S::Submitted && from != S::Queued) return std::nullopt;
  // The three job-ending triggers behave identically from every live
  // post-admission state.
  const bool ending = trigger == T::AllTasksDone ||
                      trigger == T::TaskFailedFatally || trigger == T::Cancel;
  switch (from) {
    case S::Submitted:
      if (trigger == T::Admit) return qos ? S::QoS : S::Queued;
      return std::nullopt;
    case S::QoS:
      if (ending) return S::Finished;
      if (trigger == T::NoCapacity) return S::Queued;
      if (trigger == T::DeadlineAtRisk) return S::Underprovisioned;
      if (trigger == T::DeadlineSafe) return S::Provisioned;
      return std::nullopt;
    case S::Queued:
      if (ending) return S::Finished;
      if (qos && trigger == T::DeadlineAtRisk) return S::Underprovisioned;
      if (qos && trigger == T::DeadlineSafe) return S::Provisioned;
      return std::nullopt;
    case S::Underprovisioned:
      if (ending) return S::Finished;
      if (trigger == T::DeadlineAtRisk) return S::Underprovisioned;
      if (trigger == T::DeadlineSafe) return S::Provisioned;
      if (trigger == T::DeadlineImpossible) return S::Unfeasible;
      return std::nullopt;
    case S::Provisioned:
      if (ending) return S::Finished;
      if (trigger == T::DeadlineAtRisk) return S::Underprovisioned;
      if (trigger == T::DeadlineSafe) return S::Provisioned;
      return std::nullopt;
    case S::Unfeasible:
      if (ending) return S::Finished;
      if (trigger == T::EarlyCompletionRecovery) return S::Underprovisioned;
      return std::nullopt;
    case S::Finished:
      return std::nullopt;
  }
  return std::nullopt;
}

JobState transition(Job& job, JobTrigger trigger, SimTime now) {
  const auto next = legal_transition(job.state, job.qos, trigger);
  if (!next) {
    throw IllegalTransitionError(
        std::string("job ") + std::to_string(job.job_id) + ": trigger " +
        to_string(trigger) + " is illegal in state " + to_string(job.state));
  }
  job.state = *next;
  if (job.state == JobState::Finished) {
    job.finished_at = now;
    switch (trigger) {
      case JobTrigger::AllTasksDone:
        job.finish_reason = FinishReason::Completed;
        break;
      case JobTrigger::TaskFailedFatally:
        job.finish_reason = FinishReason::FailedJob;
        break;
      default:
        job.finish_reason = FinishReason::CancelledJob;
        break;
    }
  }
  return job.state;
}

int remaining_tasks(const Job& job) {
  int n = 0;
  for (const auto& t : job.tasks) {
    if (t.status == TaskStatus::Pending || t.status == TaskStatus::Running) ++n;
  }
  return n;
}

int pending_tasks(const Job& job) {
  int n = 0;
  for (const auto& t : job.tasks) {
    if (t.status == TaskStatus::Pending) ++n;
  }
  return n;
}

}  // namespace slasim
