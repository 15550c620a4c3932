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

#include "slasim/provisioner.hpp"

#include <algorithm>
#include <string>

#include "slasim/errors.hpp"

namespace slasim {

Provisioner::Provisioner(std::vector<ResourcePool> pools,
                         WorkerId first_dynamic_id)
    : pools_(std::move(pools)), next_worker_id_(first_dynamic_id) {}

const ResourcePool* Provisioner::find_pool(PoolId id) const {
  for (const auto& p : pools_) {
    if (p.pool_id == id) return &p;
  }
  return nullptr;
}

std::vector<Worker> Provisioner::acquire(const AcquisitionRequest& req) {
  ResourcePool* pool = nullptr;
  for (auto& p : pools_) {
    if (p.pool_id == req.pool_id) pool = &p;
  }
  if (pool == nullptr) {
    throw SimFault("acquire from unknown pool " + std::to_string(req.pool_id));
  }
  const int grant = std::min(req.count, pool->headroom());
  std::vector<Worker> out;
  for (int i = 0; i < grant; ++i) {
    Worker w;
    w.worker_id = next_worker_id_++;
    w.origin = WorkerOrigin::Dynamic;
    w.pool_id = pool->pool_id;
    w.status = WorkerStatus::Booting;
    w.lease_start = req.issued_at;
    w.ready_at = req.issued_at + pool->boot_delay;
    w.bound_job = req.job_id;
    pool->acquired_count += 1;
    ledger_.push_back({w.worker_id, pool->pool_id, w.lease_start, 0,
                       std::nullopt});
    out.push_back(w);
  }
  return out;
}

void Provisioner::announce_ready(Worker& worker) {
  if (worker.status != WorkerStatus::Booting) {
    throw NotBootingError("worker " + std::to_string(worker.worker_id) +
                          " is " + to_string(worker.status) +
                          ", cannot finish booting");
  }
  worker.status = WorkerStatus::Idle;
}

BoundaryDecision Provisioner::on_billing_boundary(
    const WorkerView& worker, const ClusterSnapshot& snap,
    const SchedulerCore& scheduler, const std::vector<const Job*>& qos_jobs,
    const PoolView& pool) const {
  if (worker.status == WorkerStatus::Failed) {
    return BoundaryDecision::Decommission;
  }
  if (worker.status != WorkerStatus::Idle) {
    return BoundaryDecision::KeepAnotherPeriod;
  }
  const bool done_with_job = worker.releasable || !worker.bound_job ||
                             [&] {
                               const JobView* j = snap.find_job(*worker.bound_job);
                               return j == nullptr ||
                                      j->state == JobState::Finished;
                             }();
  if (!done_with_job) return BoundaryDecision::KeepAnotherPeriod;
  const std::vector<WorkerId> just_this{worker.worker_id};
  for (const Job* job : qos_jobs) {
    if (job->finished() || !job->deadline) continue;
    if (job->state == JobState::Unfeasible) continue;
    const SimTime with = scheduler.completion_excluding(*job, snap, {}, pool);
    if (with > *job->deadline) continue;  // already at risk either way
    const SimTime without =
        scheduler.completion_excluding(*job, snap, just_this, pool);
    if (without > *job->deadline) return BoundaryDecision::KeepAnotherPeriod;
  }
  return BoundaryDecision::Decommission;
}

PaidIdleOffer Provisioner::offer_paid_idle(const WorkerView& worker,
                                           const ClusterSnapshot& snap) const {
  // Releasable workers must not boomerang back to the job that let them go.
  std::optional<JobId> barred;
  if (worker.releasable && worker.bound_job) barred = *worker.bound_job;

  const JobView* pick = nullptr;
  bool regular_waiting = false;
  for (const auto& t : snap.queued) {
    if (!t.qos) {
      regular_waiting = true;
      continue;
    }
    const JobView* j = snap.find_job(t.job_id);
    if (!j || !j->deadline || j->state == JobState::Finished) continue;
    if (barred && *barred == j->job_id) continue;
    if (!pick || *j->deadline < *pick->deadline ||
        (*j->deadline == *pick->deadline && j->job_id < pick->job_id)) {
      pick = j;
    }
  }
  if (pick) return {PaidIdleOffer::Kind::Reassigned, pick->job_id};
  if (regular_waiting) return {PaidIdleOffer::Kind::OfferedToRegular, -1};
  return {PaidIdleOffer::Kind::LeftIdle, -1};
}

LeaseLedgerEntry Provisioner::decommission(Worker& worker, SimTime now) {
  if (worker.status == WorkerStatus::Busy) {
    throw WorkerBusyError("worker " + std::to_string(worker.worker_id) +
                          " is busy, cannot decommission");
  }
  if (worker.status == WorkerStatus::Decommissioned) {
    throw SimFault("worker " + std::to_string(worker.worker_id) +
                   " decommissioned twice");
  }
  ResourcePool* pool = nullptr;
  for (auto& p : pools_) {
    if (p.pool_id == worker.pool_id) pool = &p;
  }
  if (pool == nullptr || worker.origin != WorkerOrigin::Dynamic) {
    throw SimFault("worker " + std::to_string(worker.worker_id) +
                   " is not a leased dynamic worker");
  }
  if ((now - worker.lease_start) % pool->billing_period != 0) {
    throw MisalignedLeaseError(
        "worker " + std::to_string(worker.worker_id) +
        " decommissioned off its billing boundary at t=" + std::to_string(now));
  }
  worker.status = WorkerStatus::Decommissioned;
  pool->acquired_count -= 1;
  LeaseLedgerEntry* entry = open_entry(worker.worker_id);
  if (entry == nullptr) {
    throw SimFault("worker " + std::to_string(worker.worker_id) +
                   " has no open lease");
  }
  entry->decommissioned_at = now;
  entry->boundaries_crossed =
      static_cast<int>((now - entry->lease_start) / pool->billing_period);
  return *entry;
}

void Provisioner::note_boundary_survived(WorkerId worker_id) {
  if (LeaseLedgerEntry* entry = open_entry(worker_id)) {
    entry->boundaries_crossed += 1;
  }
}

LeaseLedgerEntry* Provisioner::open_entry(WorkerId worker_id) {
  for (auto& e : ledger_) {
    if (e.worker_id == worker_id && !e.decommissioned_at) return &e;
  }
  return nullptr;
}

}  // namespace slasim
