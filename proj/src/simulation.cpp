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

#include "slasim/simulation.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "slasim/errors.hpp"

namespace slasim {

namespace {

ClusterConfig with_overrides(ClusterConfig cfg, const RunOptions& opts) {
  if (opts.policy_override) cfg.policy = *opts.policy_override;
  if (opts.boot_delay_override) {
    for (auto& p : cfg.pools) p.boot_delay = *opts.boot_delay_override;
  }
  return cfg;
}

std::vector<ResourcePool> make_pools(const ClusterConfig& cfg) {
  std::vector<ResourcePool> pools;
  pools.reserve(cfg.pools.size());
  for (const auto& p : cfg.pools) pools.push_back(to_resource_pool(p));
  return pools;
}

}  // namespace

Simulation::Simulation(ClusterConfig config, WorkloadSpec workload,
                       RunOptions opts)
    : cfg_(with_overrides(std::move(config), opts)),
      workload_(std::move(workload)),
      seed_(workload_.seed ^ opts.seed_override.value_or(0)),
      provisioner_(make_pools(cfg_), cfg_.static_workers + 1),
      accounting_(cfg_.price_schedule) {
  for (int i = 0; i < cfg_.static_workers; ++i) {
    WorkerRuntime wr;
    wr.worker.worker_id = i + 1;
    wr.worker.origin = WorkerOrigin::Static;
    wr.worker.status = WorkerStatus::Idle;
    workers_.emplace(wr.worker.worker_id, std::move(wr));
  }
  for (const auto& spec : workload_.jobs) {
    Job job;
    job.job_id = spec.job_id;
    job.submitted_at = spec.arrival;
    job.qos = spec.deadline.has_value();
    if (spec.deadline) job.deadline = spec.arrival + *spec.deadline;
    job.tasks.reserve(spec.task_count);
    for (int t = 0; t < spec.task_count; ++t) {
      Task task;
      task.task_id = t;
      task.job_id = spec.job_id;
      task.estimated_runtime = spec.estimated_runtime;
      task.actual_runtime = spec.actual_runtime.realize(seed_, spec.job_id, t);
      job.tasks.push_back(task);
    }
    jobs_.emplace(job.job_id, std::move(job));
    kernel_.schedule(spec.arrival, JobArrivalEvent{spec.job_id});
  }
  for (const auto& ev : workload_.injected) {
    if (ev.kind == InjectedEvent::Kind::CancelJob) {
      kernel_.schedule(ev.at, JobCancelEvent{ev.job_id});
    } else {
      kernel_.schedule(ev.at, WorkerFailureEvent{ev.worker_id});
    }
  }
}

void Simulation::record(SimTime t, const char* kind, JobId job, TaskId task,
                        WorkerId worker, std::string detail) {
  trace_.push_back(TraceRow{t, kind, job, task, worker, std::move(detail)});
}

const PoolConfig& Simulation::pool_config(PoolId id) const {
  for (const auto& p : cfg_.pools) {
    if (p.pool_id == id) return p;
  }
  throw SimFault("unknown pool " + std::to_string(id));
}

PoolView Simulation::pool_view(PoolId id) const {
  const ResourcePool* p = provisioner_.find_pool(id);
  if (p == nullptr) throw SimFault("unknown pool " + std::to_string(id));
  return PoolView{p->pool_id, p->boot_delay, p->billing_period,
                  p->price_per_period, p->headroom()};
}

ClusterSnapshot Simulation::snapshot() const {
  ClusterSnapshot snap;
  snap.now = kernel_.now();
  for (const auto& [id, wr] : workers_) {
    const Worker& w = wr.worker;
    WorkerView v;
    v.worker_id = w.worker_id;
    v.origin = w.origin;
    v.pool_id = w.pool_id;
    v.status = w.status;
    v.ready_at = w.ready_at;
    v.lease_start = w.lease_start;
    v.releasable = w.releasable;
    v.bound_job = w.bound_job;
    if (w.status == WorkerStatus::Busy) {
      v.busy_job = w.running_job;
      v.busy_task = w.running_task;
      const Task& t = jobs_.at(w.running_job).tasks.at(w.running_task);
      v.busy_until = t.started_at + t.estimated_runtime;
    }
    snap.workers.push_back(v);
  }
  for (const auto& [id, job] : jobs_) {
    if (job.state == JobState::Submitted) continue;  // rejected or not arrived
    snap.jobs.push_back(
        JobView{job.job_id, job.qos, job.state, job.deadline, job.submitted_at});
    if (job.state == JobState::Finished) continue;
    for (const auto& t : job.tasks) {
      if (t.status == TaskStatus::Pending) {
        snap.queued.push_back(
            QueuedTaskView{job.job_id, t.task_id, job.qos, job.submitted_at});
      }
    }
  }
  for (const auto& p : provisioner_.pools()) {
    snap.pools.push_back(PoolView{p.pool_id, p.boot_delay, p.billing_period,
                                  p.price_per_period, p.headroom()});
  }
  return snap;
}

std::vector<const Job*> Simulation::unfinished_qos_jobs() const {
  std::vector<const Job*> out;
  for (const auto& [id, job] : jobs_) {
    if (job.qos && job.state != JobState::Submitted && !job.finished()) {
      out.push_back(&job);
    }
  }
  return out;
}

void Simulation::start_serving(WorkerRuntime& wr, std::optional<JobId> job_id) {
  wr.serving_job = job_id;
  wr.serving_since = kernel_.now();
}

void Simulation::close_serving(WorkerRuntime& wr, SimTime at) {
  if (at > wr.serving_since) {
    wr.serving.push_back({wr.serving_job, wr.serving_since, at});
  }
  wr.serving_since = at;
}

void Simulation::apply_state(Job& job, JobTrigger trigger) {
  const JobState before = job.state;
  transition(job, trigger, kernel_.now());
  record(kernel_.now(), "state_change", job.job_id, -1, -1,
         std::string("from=") + to_string(before) + " to=" +
             to_string(job.state) + " trigger=" + to_string(trigger));
  if (!job.finished()) return;

  record(kernel_.now(), "job_finished", job.job_id, -1, -1,
         std::string("reason=") + to_string(*job.finish_reason));
  if (job.qos && job.finish_reason == FinishReason::Completed) {
    accounting_.sla_outcome(job);
  }
  // The job's leased workers no longer serve anyone; idle ones go up for
  // reuse immediately, busy ones when their borrowed task ends.
  for (auto& [wid, wr] : workers_) {
    Worker& w = wr.worker;
    if (w.origin != WorkerOrigin::Dynamic) continue;
    if (!w.bound_job || *w.bound_job != job.job_id) continue;
    if (w.status == WorkerStatus::Decommissioned ||
        w.status == WorkerStatus::Failed) {
      continue;
    }
    if (!w.releasable) {
      close_serving(wr, kernel_.now());
      start_serving(wr, std::nullopt);
      record(kernel_.now(), "unbind", -1, -1, wid);
    }
    if (w.status == WorkerStatus::Idle) offer_worker(wr);
  }
}

void Simulation::apply_dispatch(const DispatchTask& d) {
  Job& job = jobs_.at(d.job_id);
  Task& task = job.tasks.at(d.task_id);
  WorkerRuntime& wr = workers_.at(d.worker_id);
  if (task.status != TaskStatus::Pending ||
      wr.worker.status != WorkerStatus::Idle) {
    throw SimFault("dispatch of job " + std::to_string(d.job_id) + " task " +
                   std::to_string(d.task_id) + " to worker " +
                   std::to_string(d.worker_id) + " is not runnable");
  }
  task.status = TaskStatus::Running;
  task.started_at = kernel_.now();
  task.worker_id = d.worker_id;
  task.attempts += 1;
  wr.worker.status = WorkerStatus::Busy;
  wr.worker.running_job = d.job_id;
  wr.worker.running_task = d.task_id;
  const EventId ev = kernel_.schedule(
      kernel_.now() + task.actual_runtime,
      TaskFinishEvent{d.job_id, d.task_id, d.worker_id});
  task_finish_events_[{d.job_id, d.task_id}] = ev;
  record(kernel_.now(), "task_dispatch", d.job_id, d.task_id, d.worker_id);
}

void Simulation::apply_request(Job& job, const RequestResources& req) {
  const ClusterSnapshot before = snapshot();
  const auto profile = scheduler_.availability(job, before);
  AcquisitionRequest ar;
  ar.request_id = provisioner_.next_request_id();
  ar.job_id = req.job_id;
  ar.pool_id = req.pool_id;
  ar.count = req.count;
  ar.issued_at = kernel_.now();
  std::vector<Worker> granted = provisioner_.acquire(ar);
  const PoolView pv = pool_view(req.pool_id);
  for (Worker& w : granted) {
    WorkerRuntime wr;
    wr.worker = w;
    wr.serving_job = req.job_id;
    wr.serving_since = kernel_.now();
    wr.boot_event = kernel_.schedule(w.ready_at,
                                     WorkerBootCompleteEvent{w.worker_id});
    wr.boundary_event = kernel_.schedule(w.lease_start + pv.billing_period,
                                         BillingBoundaryEvent{w.worker_id});
    record(kernel_.now(), "acquire", req.job_id, -1, w.worker_id,
           "pool=" + std::to_string(req.pool_id) +
               " request=" + std::to_string(ar.request_id));
    workers_.emplace(w.worker_id, std::move(wr));
  }
  if (probe_ != nullptr) {
    GrantObservation obs;
    obs.now = kernel_.now();
    obs.job_id = req.job_id;
    obs.requested = req.count;
    obs.granted = static_cast<int>(granted.size());
    obs.deadline_at = job.deadline.value_or(0);
    obs.predicted_completion =
        scheduler_.completion_excluding(job, snapshot(), {}, pv);
    obs.capacity = profile.capacity;
    obs.running_floor = profile.running_floor;
    obs.has_running = profile.has_running;
    obs.pending_tasks = pending_tasks(job);
    obs.per_task_estimate = scheduler_.current_estimate(job);
    obs.boot_delay = pv.boot_delay;
    probe_->on_grant(obs);
  }
  if (static_cast<int>(granted.size()) < req.count) {
    reeval_.push_back(req.job_id);  // shortfall; re-plan with what exists
  }
}

void Simulation::apply_release(const ReleaseResources& rel) {
  for (WorkerId wid : rel.worker_ids) {
    WorkerRuntime& wr = workers_.at(wid);
    Worker& w = wr.worker;
    if (w.origin != WorkerOrigin::Dynamic || w.releasable ||
        w.status == WorkerStatus::Decommissioned ||
        w.status == WorkerStatus::Failed) {
      throw SimFault("release of worker " + std::to_string(wid) +
                     " in status " + to_string(w.status));
    }
    const JobId from = w.bound_job.value_or(-1);
    w.releasable = true;
    close_serving(wr, kernel_.now());
    start_serving(wr, std::nullopt);
    record(kernel_.now(), "release", from, -1, wid);
    if (w.status == WorkerStatus::Idle) offer_worker(wr);
    // Booting and busy workers are offered when they come free.
  }
}

void Simulation::offer_worker(WorkerRuntime& wr) {
  Worker& w = wr.worker;
  if (w.status != WorkerStatus::Idle || w.origin != WorkerOrigin::Dynamic) {
    return;
  }
  ClusterSnapshot snap = snapshot();
  const WorkerView* view = snap.find_worker(w.worker_id);
  const PaidIdleOffer offer = provisioner_.offer_paid_idle(*view, snap);
  switch (offer.kind) {
    case PaidIdleOffer::Kind::Reassigned: {
      close_serving(wr, kernel_.now());
      w.bound_job = offer.job_id;
      w.releasable = false;
      start_serving(wr, offer.job_id);
      record(kernel_.now(), "rebind", offer.job_id, -1, w.worker_id);
      reeval_.push_back(offer.job_id);
      break;
    }
    case PaidIdleOffer::Kind::OfferedToRegular: {
      close_serving(wr, kernel_.now());
      w.bound_job.reset();
      w.releasable = false;
      start_serving(wr, std::nullopt);
      record(kernel_.now(), "unbind", -1, -1, w.worker_id);
      break;
    }
    case PaidIdleOffer::Kind::LeftIdle:
      break;
  }
}

void Simulation::apply_actions(const std::vector<SchedulerAction>& actions) {
  for (const auto& action : actions) {
    if (const auto* s = std::get_if<SetJobState>(&action)) {
      apply_state(jobs_.at(s->job_id), s->trigger);
    } else if (const auto* r = std::get_if<RequestResources>(&action)) {
      apply_request(jobs_.at(r->job_id), *r);
    } else if (const auto* rel = std::get_if<ReleaseResources>(&action)) {
      apply_release(*rel);
    } else if (const auto* d = std::get_if<DispatchTask>(&action)) {
      apply_dispatch(*d);
    }
  }
}

void Simulation::evaluate(EvaluateCause cause, Job& job,
                          std::optional<Duration> completed_runtime) {
  if (job.state == JobState::Submitted || job.finished()) return;
  // Refresh the estimate before the snapshot: busy projections derive from
  // task estimates, so planning must see the refreshed ones.
  bool estimate_changed = false;
  if (cause == EvaluateCause::TaskFinish && completed_runtime) {
    const Duration before = scheduler_.current_estimate(job);
    estimate_changed =
        scheduler_.update_estimate(job, *completed_runtime) != before;
  }
  const auto actions = scheduler_.on_job_event(
      cause, job, snapshot(), pool_view(cfg_.default_pool), cfg_.policy,
      estimate_changed);
  apply_actions(actions);
  settle_dispatch();
}

void Simulation::settle_dispatch() {
  while (true) {
    const auto extra = scheduler_.dispatch(snapshot());
    if (extra.empty()) break;
    for (const auto& d : extra) apply_dispatch(d);
  }
}

void Simulation::run_reevals() {
  if (draining_) return;
  draining_ = true;
  while (!reeval_.empty()) {
    const JobId id = reeval_.front();
    reeval_.pop_front();
    Job& job = jobs_.at(id);
    if (job.state == JobState::Submitted || job.finished()) continue;
    const auto actions = scheduler_.on_job_event(
        EvaluateCause::ResourceChange, job, snapshot(),
        pool_view(cfg_.default_pool), cfg_.policy);
    apply_actions(actions);
    settle_dispatch();
  }
  draining_ = false;
}

void Simulation::on_job_arrival(const Event& ev) {
  const JobId id = std::get<JobArrivalEvent>(ev.payload).job_id;
  Job& job = jobs_.at(id);
  record(kernel_.now(), "job_submitted", id, -1, -1,
         job.qos ? "qos deadline_at=" + std::to_string(*job.deadline) : "");
  const PoolView pv = pool_view(cfg_.default_pool);
  const AdmitResult admit =
      scheduler_.examine_and_admit(job, snapshot(), pv, cfg_.strict_admission);
  if (!admit.admitted) {
    rejected_[id] = 1;
    record(kernel_.now(), "job_rejected", id, -1, -1,
           std::string("reason=") + to_string(*admit.reason));
    return;
  }
  apply_state(job, JobTrigger::Admit);
  evaluate(EvaluateCause::JobArrival, job);
  run_reevals();
  if (probe_ != nullptr && !job.finished()) {
    probe_->on_arrival_prediction(
        id, scheduler_.completion_excluding(job, snapshot(), {}, pv),
        job.deadline.value_or(0));
  }
}

void Simulation::on_task_finish(const Event& ev) {
  const auto& payload = std::get<TaskFinishEvent>(ev.payload);
  Job& job = jobs_.at(payload.job_id);
  Task& task = job.tasks.at(payload.task_id);
  WorkerRuntime& wr = workers_.at(payload.worker_id);
  task.status = TaskStatus::Done;
  task.finished_at = kernel_.now();
  task_finish_events_.erase({payload.job_id, payload.task_id});
  wr.worker.status = WorkerStatus::Idle;
  wr.worker.running_job = -1;
  wr.worker.running_task = -1;
  record(kernel_.now(), "task_finish", payload.job_id, payload.task_id,
         payload.worker_id, "runtime=" + std::to_string(task.actual_runtime));

  if (remaining_tasks(job) == 0) {
    apply_state(job, JobTrigger::AllTasksDone);  // also frees bound workers
    settle_dispatch();
    run_reevals();
    return;
  }

  // A leased worker that is done with its job gets re-offered before the
  // scheduler round so an urgent deadline can claim it.
  Worker& w = wr.worker;
  if (w.origin == WorkerOrigin::Dynamic) {
    const bool done_with_job =
        w.releasable || !w.bound_job ||
        (jobs_.count(*w.bound_job) != 0 && jobs_.at(*w.bound_job).finished());
    if (done_with_job) offer_worker(wr);
  }
  evaluate(EvaluateCause::TaskFinish, job, task.actual_runtime);
  run_reevals();
}

void Simulation::on_boot_complete(const Event& ev) {
  const WorkerId wid = std::get<WorkerBootCompleteEvent>(ev.payload).worker_id;
  WorkerRuntime& wr = workers_.at(wid);
  provisioner_.announce_ready(wr.worker);
  wr.boot_event = 0;
  record(kernel_.now(), "boot_complete", wr.worker.bound_job.value_or(-1), -1,
         wid);
  Worker& w = wr.worker;
  const bool owner_live = w.bound_job && jobs_.count(*w.bound_job) != 0 &&
                          !jobs_.at(*w.bound_job).finished() && !w.releasable;
  if (owner_live) {
    evaluate(EvaluateCause::ResourceChange, jobs_.at(*w.bound_job));
  } else {
    offer_worker(wr);
    settle_dispatch();
  }
  run_reevals();
}

void Simulation::on_job_cancel(const Event& ev) {
  const JobId id = std::get<JobCancelEvent>(ev.payload).job_id;
  auto it = jobs_.find(id);
  if (it == jobs_.end() || it->second.state == JobState::Submitted ||
      it->second.finished()) {
    record(kernel_.now(), "job_cancelled", id, -1, -1, "no-op");
    return;
  }
  Job& job = it->second;
  record(kernel_.now(), "job_cancelled", id);
  for (auto& task : job.tasks) {
    if (task.status == TaskStatus::Pending) {
      task.status = TaskStatus::Cancelled;
    } else if (task.status == TaskStatus::Running) {
      auto ev_it = task_finish_events_.find({id, task.task_id});
      if (ev_it != task_finish_events_.end()) {
        kernel_.cancel(ev_it->second);
        task_finish_events_.erase(ev_it);
      }
      task.status = TaskStatus::Cancelled;
      WorkerRuntime& wr = workers_.at(task.worker_id);
      wr.worker.status = WorkerStatus::Idle;
      wr.worker.running_job = -1;
      wr.worker.running_task = -1;
    }
  }
  apply_state(job, JobTrigger::Cancel);  // frees and re-offers bound workers
  // Unbound or borrowed dynamic workers freed by the cancellation.
  for (auto& [wid, wr] : workers_) {
    if (wr.worker.origin == WorkerOrigin::Dynamic &&
        wr.worker.status == WorkerStatus::Idle) {
      const bool loose =
          !wr.worker.bound_job ||
          jobs_.at(*wr.worker.bound_job).finished() || wr.worker.releasable;
      if (loose) offer_worker(wr);
    }
  }
  settle_dispatch();
  run_reevals();
}

void Simulation::on_worker_failure(const Event& ev) {
  const WorkerId wid = std::get<WorkerFailureEvent>(ev.payload).worker_id;
  auto it = workers_.find(wid);
  if (it == workers_.end() ||
      it->second.worker.status == WorkerStatus::Decommissioned ||
      it->second.worker.status == WorkerStatus::Failed) {
    record(kernel_.now(), "worker_failure", -1, -1, wid, "no-op");
    return;
  }
  WorkerRuntime& wr = it->second;
  Worker& w = wr.worker;
  record(kernel_.now(), "worker_failure",
         w.status == WorkerStatus::Busy ? w.running_job : -1, -1, wid);

  std::optional<JobId> affected;
  if (w.status == WorkerStatus::Booting) {
    kernel_.cancel(wr.boot_event);
    wr.boot_event = 0;
    if (w.bound_job) affected = w.bound_job;
  } else if (w.status == WorkerStatus::Busy) {
    Job& job = jobs_.at(w.running_job);
    Task& task = job.tasks.at(w.running_task);
    auto ev_it = task_finish_events_.find({job.job_id, task.task_id});
    if (ev_it != task_finish_events_.end()) {
      kernel_.cancel(ev_it->second);
      task_finish_events_.erase(ev_it);
    }
    if (task.attempts >= cfg_.max_task_attempts) {
      task.status = TaskStatus::Failed;
      if (!job.finished()) {
        // Fatal for the whole job: stop its other tasks.
        for (auto& other : job.tasks) {
          if (other.task_id == task.task_id) continue;
          if (other.status == TaskStatus::Pending) {
            other.status = TaskStatus::Cancelled;
          } else if (other.status == TaskStatus::Running) {
            auto oit = task_finish_events_.find({job.job_id, other.task_id});
            if (oit != task_finish_events_.end()) {
              kernel_.cancel(oit->second);
              task_finish_events_.erase(oit);
            }
            other.status = TaskStatus::Cancelled;
            WorkerRuntime& owr = workers_.at(other.worker_id);
            owr.worker.status = WorkerStatus::Idle;
            owr.worker.running_job = -1;
            owr.worker.running_task = -1;
          }
        }
        apply_state(job, JobTrigger::TaskFailedFatally);
      }
    } else {
      task.status = TaskStatus::Pending;
      task.worker_id = -1;
      task.started_at = -1;
      record(kernel_.now(), "task_requeued", job.job_id, task.task_id, wid,
             "attempt=" + std::to_string(task.attempts));
      if (!job.finished()) affected = job.job_id;
    }
  } else if (w.bound_job && jobs_.count(*w.bound_job) != 0 &&
             !jobs_.at(*w.bound_job).finished()) {
    affected = w.bound_job;
  }

  w.status = WorkerStatus::Failed;
  w.running_job = -1;
  w.running_task = -1;
  if (w.origin == WorkerOrigin::Dynamic) {
    close_serving(wr, kernel_.now());
    start_serving(wr, std::nullopt);
    // The lease keeps billing until its next boundary, where the dead worker
    // is decommissioned; the boundary event is already scheduled.
  }
  if (affected && !jobs_.at(*affected).finished()) {
    evaluate(EvaluateCause::ResourceChange, jobs_.at(*affected));
  } else {
    settle_dispatch();
  }
  run_reevals();
}

void Simulation::on_billing_boundary(const Event& ev) {
  const WorkerId wid = std::get<BillingBoundaryEvent>(ev.payload).worker_id;
  WorkerRuntime& wr = workers_.at(wid);
  if (wr.worker.status == WorkerStatus::Decommissioned) {
    throw SimFault("billing boundary for decommissioned worker " +
                   std::to_string(wid));
  }
  const ClusterSnapshot snap = snapshot();
  const WorkerView* view = snap.find_worker(wid);
  const PoolView pv = pool_view(wr.worker.pool_id);
  const BoundaryDecision decision = provisioner_.on_billing_boundary(
      *view, snap, scheduler_, unfinished_qos_jobs(), pv);
  if (decision == BoundaryDecision::KeepAnotherPeriod) {
    provisioner_.note_boundary_survived(wid);
    wr.boundary_event = kernel_.schedule(kernel_.now() + pv.billing_period,
                                         BillingBoundaryEvent{wid});
    record(kernel_.now(), "billing_boundary", -1, -1, wid, "keep");
  } else {
    record(kernel_.now(), "billing_boundary", -1, -1, wid, "decommission");
    decommission_worker(wr);
  }
}

void Simulation::decommission_worker(WorkerRuntime& wr) {
  const WorkerId wid = wr.worker.worker_id;
  const ResourcePool* pool = provisioner_.find_pool(wr.worker.pool_id);
  provisioner_.decommission(wr.worker, kernel_.now());
  close_serving(wr, kernel_.now());
  const UsageRecord& rec = accounting_.close_lease(
      wid, *pool, wr.worker.lease_start, kernel_.now(), wr.serving);
  wr.lease_end = kernel_.now();
  wr.billed_periods = rec.billed_periods;
  wr.cost = rec.cost;
  record(kernel_.now(), "decommission", -1, -1, wid,
         "periods=" + std::to_string(rec.billed_periods) +
             " cost=" + std::to_string(rec.cost));
}

void Simulation::finish_job_if_done(Job& job) {
  if (!job.finished() && remaining_tasks(job) == 0) {
    apply_state(job, JobTrigger::AllTasksDone);
  }
}

RunReport Simulation::run() {
  if (ran_) throw SimFault("Simulation::run called twice");
  ran_ = true;
  HandlerSet handlers;
  handlers.set(EventKind::JobArrival, [this](const Event& e) { on_job_arrival(e); });
  handlers.set(EventKind::TaskFinish, [this](const Event& e) { on_task_finish(e); });
  handlers.set(EventKind::WorkerBootComplete,
               [this](const Event& e) { on_boot_complete(e); });
  handlers.set(EventKind::JobCancel, [this](const Event& e) { on_job_cancel(e); });
  handlers.set(EventKind::WorkerFailure,
               [this](const Event& e) { on_worker_failure(e); });
  handlers.set(EventKind::BillingBoundary,
               [this](const Event& e) { on_billing_boundary(e); });
  handlers.set(EventKind::SimEnd, [](const Event&) {});
  const SimTime drained = kernel_.run_until_drained(handlers);
  record(drained, "sim_end");
  return make_report(drained);
}

RunReport Simulation::make_report(SimTime drained_at) {
  for (const auto& [wid, wr] : workers_) {
    if (wr.worker.origin == WorkerOrigin::Dynamic &&
        wr.worker.status != WorkerStatus::Decommissioned) {
      throw SimFault("run drained with worker " + std::to_string(wid) +
                     " still leased");
    }
  }

  RunReport report;
  report.config = cfg_;
  report.seed = seed_;
  report.events = std::move(trace_);
  report.cost_by_job = accounting_.job_cost_attribution();

  RunTotals& t = report.totals;
  t.drained_at = drained_at;
  t.jobs_total = static_cast<int>(jobs_.size());
  t.dynamic_workers_acquired = static_cast<int>(provisioner_.ledger().size());
  t.extra_cost = accounting_.total_dynamic_cost();
  auto shared = report.cost_by_job.find(kSharedAccount);
  t.shared_cost = shared == report.cost_by_job.end() ? 0 : shared->second;
  const PoolConfig* def = nullptr;
  for (const auto& p : cfg_.pools) {
    if (p.pool_id == cfg_.default_pool) def = &p;
  }
  if (def != nullptr && cfg_.static_workers > 0) {
    const std::int64_t periods =
        (drained_at + def->billing_period - 1) / def->billing_period;
    for (std::int64_t k = 0; k < periods; ++k) {
      t.static_cost += cfg_.static_workers *
                       period_price(def->price_per_period,
                                    k * def->billing_period, cfg_.price_schedule);
    }
  }

  for (const auto& [id, job] : jobs_) {
    JobOutcome o;
    o.job_id = id;
    o.qos = job.qos;
    o.final_state = job.state;
    o.submitted_at = job.submitted_at;
    o.deadline_at = job.deadline;
    o.finished_at = job.finished_at;
    o.finish_reason = job.finish_reason;
    o.tasks_total = static_cast<int>(job.tasks.size());
    for (const auto& task : job.tasks) {
      if (task.status == TaskStatus::Done) o.tasks_done += 1;
    }
    if (job.finished()) {
      t.jobs_finished += 1;
      t.makespan = std::max(t.makespan, *job.finished_at);
      if (job.qos) {
        if (job.finish_reason == FinishReason::Completed) {
          o.sla_met = *job.finished_at <= *job.deadline;
          (*o.sla_met ? t.qos_met : t.qos_missed) += 1;
        } else if (job.finish_reason == FinishReason::FailedJob) {
          t.qos_missed += 1;
        }
      }
    }
    if (rejected_.count(id) != 0) t.jobs_rejected += 1;
    report.jobs.push_back(std::move(o));
  }

  for (const auto& [wid, wr] : workers_) {
    WorkerOutcome o;
    o.worker_id = wid;
    o.origin = wr.worker.origin;
    o.pool_id = wr.worker.pool_id;
    o.lease_start = wr.worker.lease_start;
    o.lease_end = wr.lease_end;
    o.billed_periods = wr.billed_periods;
    o.cost = wr.cost;
    o.final_status = wr.worker.status;
    report.workers.push_back(o);
  }
  return report;
}

RunReport run_scenario(const ClusterConfig& config, const WorkloadSpec& workload,
                       const std::filesystem::path& out_dir, RunOptions opts,
                       SimulationProbe* probe) {
  Simulation sim(config, workload, opts);
  if (probe != nullptr) sim.set_probe(probe);
  RunReport report = sim.run();
  std::filesystem::create_directories(out_dir);
  write_events_csv(out_dir / "events.csv", report.events);
  write_jobs_csv(out_dir / "jobs.csv", report);
  write_workers_csv(out_dir / "workers.csv", report);
  write_summary_json(out_dir / "summary.json", report);
  return report;
}

}  // namespace slasim
