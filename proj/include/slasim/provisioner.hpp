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
#include "slasim/scheduler.hpp"
#include "slasim/snapshot.hpp"

namespace slasim {

struct AcquisitionRequest {
  std::int64_t request_id = 0;
  JobId job_id = 0;
  PoolId pool_id = 0;
  int count = 0;  // >= 1
  SimTime issued_at = 0;
};

struct LeaseLedgerEntry {
  WorkerId worker_id = 0;
  PoolId pool_id = 0;
  SimTime lease_start = 0;
  int boundaries_crossed = 0;
  std::optional<SimTime> decommissioned_at;
};

enum class BoundaryDecision { KeepAnotherPeriod, Decommission };

// Outcome of offering a paid-but-idle dynamic worker for reuse inside its
// billing window.
struct PaidIdleOffer {
  enum class Kind { Reassigned, OfferedToRegular, LeftIdle };
  Kind kind = Kind::LeftIdle;
  JobId job_id = -1;  // Reassigned target
};

// Dynamic Provisioner + Resource Pool Manager: leases dynamic workers with
// boot latency, tracks pool headroom, enforces billing-window decommission
// rules, and reuses paid idle time.
class Provisioner {
 public:
  Provisioner(std::vector<ResourcePool> pools, WorkerId first_dynamic_id);

  const ResourcePool* find_pool(PoolId id) const;

  // Creates up to req.count Booting workers bound to req.job_id (capped by
  // pool headroom), opening a ledger entry per worker. Returns the new
  // workers; the caller stores them and schedules their boot-complete and
  // first billing-boundary events. An empty return means the pool was
  // exhausted.
  std::vector<Worker> acquire(const AcquisitionRequest& req);

  // Booting -> Idle. Throws NotBootingError otherwise.
  void announce_ready(Worker& worker);

  // Decision at now == lease_start + k * billing_period. A worker is
  // decommissioned only when idle and done with its job (released, or the
  // bound job finished, or unbound), and only if no Provisioned QoS job's
  // completion estimate would slip past its deadline without it. Failed
  // workers always decommission; Busy and Booting workers are always kept.
  BoundaryDecision on_billing_boundary(const WorkerView& worker,
                                       const ClusterSnapshot& snap,
                                       const SchedulerCore& scheduler,
                                       const std::vector<const Job*>& qos_jobs,
                                       const PoolView& pool) const;

  // Reuse decision for a paid idle worker: rebind to the queued QoS job with
  // the earliest deadline (never the job it was just released from), else
  // serve regular queued tasks unbound, else stay idle until the boundary.
  PaidIdleOffer offer_paid_idle(const WorkerView& worker,
                                const ClusterSnapshot& snap) const;

  // Closes the lease: worker Decommissioned, ledger entry stamped, pool
  // count decremented. Throws WorkerBusyError for a Busy worker and
  // MisalignedLeaseError off a billing boundary.
  LeaseLedgerEntry decommission(Worker& worker, SimTime now);

  void note_boundary_survived(WorkerId worker_id);

  const std::vector<LeaseLedgerEntry>& ledger() const { return ledger_; }
  const std::vector<ResourcePool>& pools() const { return pools_; }
  std::int64_t next_request_id() { return next_request_id_++; }

 private:
  LeaseLedgerEntry* open_entry(WorkerId worker_id);

  std::vector<ResourcePool> pools_;
  std::vector<LeaseLedgerEntry> ledger_;
  WorkerId next_worker_id_;
  std::int64_t next_request_id_ = 1;
};

}  // namespace slasim
