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

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "slasim/accounting.hpp"
#include "slasim/config.hpp"
#include "slasim/kernel.hpp"
#include "slasim/provisioner.hpp"
#include "slasim/report.hpp"
#include "slasim/scheduler.hpp"
#include "slasim/trace.hpp"

namespace slasim {

struct RunOptions {
  std::optional<ProvisioningPolicy> policy_override;
  std::optional<Duration> boot_delay_override;  // applied to every pool
  std::optional<std::uint64_t> seed_override;   // XORed into the workload seed
};

// Everything the scheduler knew the moment a resource request was granted,
// exposed so tests can re-derive the decision independently.
struct GrantObservation {
  SimTime now = 0;
  JobId job_id = 0;
  int requested = 0;
  int granted = 0;
  SimTime deadline_at = 0;
  SimTime predicted_completion = 0;      // dry run including granted workers
  std::vector<SimTime> capacity;         // availability without the grant
  SimTime running_floor = 0;
  bool has_running = false;
  int pending_tasks = 0;
  Duration per_task_estimate = 0;
  Duration boot_delay = 0;
};

class SimulationProbe {
 public:
  virtual ~SimulationProbe() = default;
  virtual void on_grant(const GrantObservation&) {}
  // Completion prediction for a job once its arrival-time evaluation
  // (including any grant) settled.
  virtual void on_arrival_prediction(JobId, SimTime /*predicted*/,
                                     SimTime /*deadline_at*/) {}
};

// Owns the event loop and all mutable cluster state; turns scheduler
// decisions into events and events back into scheduler evaluations.
// Single-shot: construct, run(), read the report.
class Simulation {
 public:
  Simulation(ClusterConfig config, WorkloadSpec workload, RunOptions opts = {});

  void set_probe(SimulationProbe* probe) { probe_ = probe; }

  RunReport run();

 private:
  struct WorkerRuntime {
    Worker worker;
    std::vector<ServingInterval> serving;  // closed intervals
    std::optional<JobId> serving_job;      // open interval owner
    SimTime serving_since = 0;
    EventId boot_event = 0;       // cancellable while Booting
    EventId boundary_event = 0;   // next billing boundary
    std::optional<SimTime> lease_end;
    std::int64_t billed_periods = 0;
    Money cost = 0;
  };

  // Event handlers.
  void on_job_arrival(const Event& ev);
  void on_task_finish(const Event& ev);
  void on_boot_complete(const Event& ev);
  void on_job_cancel(const Event& ev);
  void on_worker_failure(const Event& ev);
  void on_billing_boundary(const Event& ev);

  ClusterSnapshot snapshot() const;
  PoolView pool_view(PoolId id) const;
  const PoolConfig& pool_config(PoolId id) const;

  void evaluate(EvaluateCause cause, Job& job,
                std::optional<Duration> completed_runtime = std::nullopt);
  void apply_actions(const std::vector<SchedulerAction>& actions);
  void apply_dispatch(const DispatchTask& d);
  void apply_request(Job& job, const RequestResources& req);
  void apply_release(const ReleaseResources& rel);
  void apply_state(Job& job, JobTrigger trigger);

  // Paid-idle reuse for an idle mid-period dynamic worker. A releasable
  // worker is never rebound to the job that let it go.
  void offer_worker(WorkerRuntime& wr);

  // Repeats scheduler dispatch rounds until nothing else can start, covering
  // workers whose eligibility changed while actions were applied.
  void settle_dispatch();

  // Drains pending re-evaluations (grant shortfalls, rebinds) outside the
  // action-application stack.
  void run_reevals();

  void start_serving(WorkerRuntime& wr, std::optional<JobId> job_id);
  void close_serving(WorkerRuntime& wr, SimTime at);
  void decommission_worker(WorkerRuntime& wr);
  void finish_job_if_done(Job& job);
  void record(SimTime t, const char* kind, JobId job = -1, TaskId task = -1,
              WorkerId worker = -1, std::string detail = "");

  std::vector<const Job*> unfinished_qos_jobs() const;
  RunReport make_report(SimTime drained_at);

  ClusterConfig cfg_;
  WorkloadSpec workload_;
  std::uint64_t seed_ = 0;
  SimKernel kernel_;
  SchedulerCore scheduler_;
  Provisioner provisioner_;
  Accounting accounting_;
  std::map<JobId, Job> jobs_;
  std::map<JobId, int> rejected_;  // job_id -> 1, kept out of jobs_
  std::map<WorkerId, WorkerRuntime> workers_;
  std::map<std::pair<JobId, TaskId>, EventId> task_finish_events_;
  std::deque<JobId> reeval_;
  bool draining_ = false;
  std::vector<TraceRow> trace_;
  SimulationProbe* probe_ = nullptr;
  bool ran_ = false;
};

// Convenience wrapper: run and write events.csv, jobs.csv, workers.csv and
// summary.json under out_dir (created if missing).
RunReport run_scenario(const ClusterConfig& config, const WorkloadSpec& workload,
                       const std::filesystem::path& out_dir,
                       RunOptions opts = {}, SimulationProbe* probe = nullptr);

}  // namespace slasim
