// Copyright 2026 The slasim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "slasim/errors.hpp"
#include "slasim/scheduler.hpp"

namespace slasim {
namespace {

constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

PoolView make_pool(int headroom = 1000) {
  PoolView p;
  p.pool_id = 1;
  p.boot_delay = 90'000;
  p.billing_period = 3'600'000;
  p.price_per_period = 85'000;
  p.headroom = headroom;
  return p;
}

Job make_job(JobId id, int tasks, Duration est,
             std::optional<SimTime> deadline, SimTime submitted = 0) {
  Job j;
  j.job_id = id;
  j.qos = deadline.has_value();
  j.deadline = deadline;
  j.submitted_at = submitted;
  j.state = j.qos ? JobState::QoS : JobState::Queued;
  for (int i = 1; i <= tasks; ++i) {
    Task t;
    t.task_id = i;
    t.job_id = id;
    t.estimated_runtime = est;
    t.actual_runtime = est;
    j.tasks.push_back(t);
  }
  return j;
}

WorkerView idle_static(WorkerId id) {
  WorkerView w;
  w.worker_id = id;
  return w;
}

WorkerView busy_worker(WorkerId id, WorkerOrigin origin, JobId job,
                       TaskId task, SimTime busy_until) {
  WorkerView w;
  w.worker_id = id;
  w.origin = origin;
  w.pool_id = origin == WorkerOrigin::Dynamic ? 1 : -1;
  w.status = WorkerStatus::Busy;
  w.busy_job = job;
  w.busy_task = task;
  w.busy_until = busy_until;
  return w;
}

WorkerView dynamic_worker(WorkerId id, WorkerStatus status,
                          std::optional<JobId> bound, SimTime ready_at = 0,
                          SimTime lease_start = 0) {
  WorkerView w;
  w.worker_id = id;
  w.origin = WorkerOrigin::Dynamic;
  w.pool_id = 1;
  w.status = status;
  w.bound_job = bound;
  w.ready_at = ready_at;
  w.lease_start = lease_start;
  return w;
}

// Snapshot with queued entries derived from the jobs' Pending tasks.
ClusterSnapshot snap_of(SimTime now, std::vector<WorkerView> workers,
                        const std::vector<const Job*>& jobs,
                        const PoolView& pool) {
  ClusterSnapshot s;
  s.now = now;
  s.workers = std::move(workers);
  s.pools.push_back(pool);
  for (const Job* j : jobs) {
    s.jobs.push_back({j->job_id, j->qos, j->state, j->deadline,
                      j->submitted_at});
    if (j->finished()) continue;
    for (const Task& t : j->tasks) {
      if (t.status == TaskStatus::Pending) {
        s.queued.push_back({j->job_id, t.task_id, j->qos, j->submitted_at});
      }
    }
  }
  return s;
}

std::vector<SimTime> sorted_capacity(
    const SchedulerCore::AvailabilityProfile& prof) {
  std::vector<SimTime> c = prof.capacity;
  std::sort(c.begin(), c.end());
  return c;
}

TEST_CASE("availability classifies every worker flavor") {
  SchedulerCore core;
  Job job = make_job(1, 4, 100'000, 500'000);
  Job other = make_job(2, 1, 100'000, std::nullopt);
  std::vector<WorkerView> workers;
  workers.push_back(idle_static(1));                        // -> now
  workers.push_back(busy_worker(2, WorkerOrigin::Static, 1, 1, 130'000));
  workers.push_back(busy_worker(3, WorkerOrigin::Static, 2, 1, 160'000));
  workers.push_back(dynamic_worker(4, WorkerStatus::Booting, 1, 190'000));
  workers.push_back(dynamic_worker(5, WorkerStatus::Idle, 1));   // -> now
  {
    WorkerView w = busy_worker(6, WorkerOrigin::Dynamic, 1, 2, 140'000);
    w.bound_job = 1;
    workers.push_back(w);  // bound busy -> busy_until
  }
  workers.push_back(dynamic_worker(7, WorkerStatus::Idle, 2));   // other's
  workers.push_back(dynamic_worker(8, WorkerStatus::Idle, std::nullopt));
  {
    WorkerView w = dynamic_worker(9, WorkerStatus::Idle, 1);
    w.releasable = true;  // leaving: no capacity
    workers.push_back(w);
  }
  {
    WorkerView w = busy_worker(10, WorkerOrigin::Dynamic, 1, 3, 170'000);
    w.bound_job = 1;
    w.releasable = true;  // leaving but still floors the job
    workers.push_back(w);
  }
  {
    WorkerView w = dynamic_worker(11, WorkerStatus::Decommissioned, 1);
    workers.push_back(w);
  }
  {
    WorkerView w = dynamic_worker(12, WorkerStatus::Failed, 1);
    workers.push_back(w);
  }
  ClusterSnapshot snap =
      snap_of(100'000, workers, {&job, &other}, make_pool());

  auto prof = core.availability(job, snap);
  // Capacity: w1@now, w2@130k (static busy with this job), w4@190k (booting
  // bound), w5@now, w6@140k (bound busy), w8@now (unbound idle).
  CHECK(sorted_capacity(prof) ==
        std::vector<SimTime>{100'000, 100'000, 100'000, 130'000, 140'000,
                             190'000});
  CHECK(prof.has_running);
  CHECK(prof.running_floor == 170'000);  // the releasable runner counts
}

TEST_CASE("dry run reproduces the fixed-fleet reference makespans") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 120, 120'000, 2'700'000);
  ClusterSnapshot snap = snap_of(
      0, {idle_static(1), idle_static(2), idle_static(3), idle_static(4)},
      {&job}, pool);

  struct Row {
    int extra;
    SimTime want;
  };
  // 120 tasks of 120 s across 4 immediate slots plus n slots after a 90 s
  // boot.
  const Row rows[] = {
      {0, 3'600'000}, {1, 2'970'000}, {2, 2'490'000},
      {5, 1'680'000}, {16, 810'000},
  };
  for (const Row& row : rows) {
    CAPTURE(row.extra);
    SimTime got = core.estimate_completion(job, snap, row.extra, pool);
    CHECK(got == row.want);
    std::vector<SimTime> slots{0, 0, 0, 0};
    for (int i = 0; i < row.extra; ++i) slots.push_back(90'000);
    CHECK(got == oracle::list_schedule(slots, 120, 120'000, 0));
  }
}

TEST_CASE("dry run agrees with the oracle on randomized inputs") {
  SchedulerCore core;
  PoolView pool = make_pool();
  std::mt19937_64 rng(414243);
  for (int trial = 0; trial < 200; ++trial) {
    const int statics = static_cast<int>(rng() % 6);
    const int extra = static_cast<int>(rng() % 5);
    const int tasks = 1 + static_cast<int>(rng() % 40);
    const Duration est = 1'000 * (1 + static_cast<Duration>(rng() % 400));
    const SimTime now = static_cast<SimTime>(rng() % 1'000'000);
    if (statics == 0 && extra == 0) continue;
    Job job = make_job(1, tasks, est, std::nullopt);
    std::vector<WorkerView> workers;
    std::vector<SimTime> slots;
    for (int i = 0; i < statics; ++i) {
      workers.push_back(idle_static(i + 1));
      slots.push_back(now);
    }
    for (int i = 0; i < extra; ++i) slots.push_back(now + pool.boot_delay);
    ClusterSnapshot snap = snap_of(now, workers, {&job}, pool);
    CHECK(core.estimate_completion(job, snap, extra, pool) ==
          oracle::list_schedule(slots, tasks, est, now));
  }
}

TEST_CASE("dry run throws without capacity and floors on running tasks") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 2, 100'000, 1'000'000);
  ClusterSnapshot empty = snap_of(0, {}, {&job}, pool);
  CHECK_THROWS_AS(core.estimate_completion(job, empty, 0, pool),
                  NoWorkersError);
  CHECK(core.estimate_completion(job, empty, 1, pool) == 290'000);

  // A releasable worker still running one of the job's tasks floors the
  // estimate even though it adds no capacity.
  job.tasks[0].status = TaskStatus::Running;
  WorkerView runner = busy_worker(9, WorkerOrigin::Dynamic, 1, 1, 400'000);
  runner.bound_job = 1;
  runner.releasable = true;
  ClusterSnapshot floored =
      snap_of(0, {idle_static(1), runner}, {&job}, pool);
  CHECK(core.estimate_completion(job, floored, 0, pool) == 400'000);

  // Done jobs with nothing pending report the floor alone.
  job.tasks[1].status = TaskStatus::Done;
  ClusterSnapshot only_runner = snap_of(0, {runner}, {&job}, pool);
  CHECK(core.estimate_completion(job, only_runner, 0, pool) == 400'000);
}

TEST_CASE("completion_excluding reports infinity instead of throwing") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 3, 120'000, 900'000);
  ClusterSnapshot snap =
      snap_of(0, {idle_static(1), idle_static(2)}, {&job}, pool);
  CHECK(core.completion_excluding(job, snap, {}, pool) == 240'000);
  CHECK(core.completion_excluding(job, snap, {2}, pool) == 360'000);
  CHECK(core.completion_excluding(job, snap, {1, 2}, pool) == kNever);
}

TEST_CASE("required_extra under cost policy is the smallest workable count") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 120, 120'000, 2'700'000);
  ClusterSnapshot snap = snap_of(
      0, {idle_static(1), idle_static(2), idle_static(3), idle_static(4)},
      {&job}, pool);

  auto need = [&](SimTime deadline) {
    job.deadline = deadline;
    return core.required_extra(job, snap, pool,
                               ProvisioningPolicy::CostOptimization);
  };
  CHECK(need(2'700'000) == 2);
  CHECK(need(1'800'000) == 5);
  CHECK(need(900'000) == 16);
  // Cross-check via the oracle search.
  for (SimTime deadline : {2'700'000, 1'800'000, 900'000}) {
    CHECK(*need(deadline) ==
          oracle::min_extra({0, 0, 0, 0}, 120, 120'000, 0, deadline, 90'000,
                            120));
  }
  // Per-task time shorter than a task: nothing helps.
  CHECK(need(100'000) == std::nullopt);
  // Headroom caps the search.
  PoolView tight = make_pool(4);
  job.deadline = 1'800'000;
  CHECK(core.required_extra(job, snap, tight,
                            ProvisioningPolicy::CostOptimization) ==
        std::nullopt);
}

TEST_CASE("required_extra under time policy takes maximal parallelism") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 120, 120'000, 2'700'000);
  ClusterSnapshot snap = snap_of(
      0, {idle_static(1), idle_static(2), idle_static(3), idle_static(4)},
      {&job}, pool);
  CHECK(core.required_extra(job, snap, pool,
                            ProvisioningPolicy::TimeOptimization) == 116);
  PoolView tight = make_pool(10);
  CHECK(core.required_extra(job, snap, tight,
                            ProvisioningPolicy::TimeOptimization) == 10);

  Job small = make_job(2, 3, 120'000, 2'700'000);
  CHECK(core.required_extra(small, snap, pool,
                            ProvisioningPolicy::TimeOptimization) ==
        std::nullopt);  // four workers already cover three tasks
}

TEST_CASE("estimate refresh is the mean of observations, ties round up") {
  SchedulerCore core;
  Job job = make_job(1, 5, 120'000, std::nullopt);
  job.tasks[0].status = TaskStatus::Done;
  job.tasks[1].status = TaskStatus::Running;

  CHECK(core.current_estimate(job) == 120'000);
  CHECK(core.update_estimate(job, 100'000) == 100'000);  // displaces the user
  CHECK(core.update_estimate(job, 107'000) == 103'500);
  CHECK(core.update_estimate(job, 100'001) == 102'334);  // 102333.67 rounds up
  CHECK(core.current_estimate(job) == 102'334);
  // Pending and Running tasks carry the refreshed estimate; Done keeps its
  // final value.
  CHECK(job.tasks[0].estimated_runtime == 120'000);
  CHECK(job.tasks[1].estimated_runtime == 102'334);
  CHECK(job.tasks[4].estimated_runtime == 102'334);

  // Prefix means along a random sample stream match the oracle formula.
  std::mt19937_64 rng(7);
  Job stream = make_job(2, 1, 50'000, std::nullopt);
  std::vector<Duration> samples;
  for (int i = 0; i < 60; ++i) {
    samples.push_back(1 + static_cast<Duration>(rng() % 1'000'000));
    CHECK(core.update_estimate(stream, samples.back()) ==
          oracle::mean_round_half_up(samples));
  }
}

TEST_CASE("admission screens jobs and registers estimates once") {
  SchedulerCore core;
  PoolView pool = make_pool();
  ClusterSnapshot snap = snap_of(1'000, {idle_static(1)}, {}, pool);

  Job no_tasks = make_job(1, 0, 120'000, 5'000'000);
  auto r1 = core.examine_and_admit(no_tasks, snap, pool, false);
  CHECK_FALSE(r1.admitted);
  CHECK(r1.reason == RejectReason::NoTasks);

  Job bad_est = make_job(2, 3, 0, 5'000'000);
  auto r2 = core.examine_and_admit(bad_est, snap, pool, false);
  CHECK(r2.reason == RejectReason::BadEstimate);

  Job expired = make_job(3, 3, 120'000, 1'000);
  auto r3 = core.examine_and_admit(expired, snap, pool, false);
  CHECK(r3.reason == RejectReason::ExpiredDeadline);

  Job ok = make_job(4, 3, 120'000, 5'000'000);
  auto r4 = core.examine_and_admit(ok, snap, pool, false);
  CHECK(r4.admitted);
  CHECK(r4.initial_state == JobState::QoS);
  CHECK(core.knows(4));
  CHECK_THROWS_AS(core.examine_and_admit(ok, snap, pool, false),
                  DuplicateJobError);

  Job regular = make_job(5, 3, 120'000, std::nullopt);
  auto r5 = core.examine_and_admit(regular, snap, pool, false);
  CHECK(r5.admitted);
  CHECK(r5.initial_state == JobState::Queued);
}

TEST_CASE("strict admission rejects deadlines out of physical reach") {
  PoolView pool = make_pool(2);
  ClusterSnapshot snap = snap_of(0, {idle_static(1)}, {}, pool);
  // Three slots at best (one static, two phantoms at 90 s) for six 120 s
  // tasks: completion 330 s at best.
  Job hopeless = make_job(1, 6, 120'000, 300'000);
  SchedulerCore strict;
  auto r = strict.examine_and_admit(hopeless, snap, pool, true);
  CHECK_FALSE(r.admitted);
  CHECK(r.reason == RejectReason::UnfeasibleAtSubmission);
  CHECK_FALSE(strict.knows(1));

  Job doable = make_job(2, 6, 120'000, 330'000);
  CHECK(strict.examine_and_admit(doable, snap, pool, true).admitted);

  // Lenient admission takes the hopeless job and lets the provisioning
  // states sort it out.
  SchedulerCore lenient;
  CHECK(lenient.examine_and_admit(hopeless, snap, pool, false).admitted);
}

TEST_CASE("dispatch prefers QoS tasks and FIFO within a class") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job early_regular = make_job(1, 2, 100'000, std::nullopt, 0);
  Job late_qos = make_job(2, 2, 100'000, 900'000, 500);
  ClusterSnapshot snap = snap_of(
      1'000, {idle_static(1), idle_static(2), idle_static(3)},
      {&early_regular, &late_qos}, pool);
  auto out = core.dispatch(snap);
  REQUIRE(out.size() == 3);
  CHECK(out[0].job_id == 2);  // QoS class first despite later submission
  CHECK(out[0].task_id == 1);
  CHECK(out[0].worker_id == 1);
  CHECK(out[1].job_id == 2);
  CHECK(out[1].task_id == 2);
  CHECK(out[1].worker_id == 2);
  CHECK(out[2].job_id == 1);  // then FIFO among regulars
  CHECK(out[2].task_id == 1);
  CHECK(out[2].worker_id == 3);
}

TEST_CASE("dispatch ranks bound, then unbound, then borrowed workers") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job qos = make_job(1, 4, 100'000, 900'000, 0);
  Job owner = make_job(2, 1, 100'000, 900'000, 0);
  owner.tasks[0].status = TaskStatus::Done;  // nothing left to place
  std::vector<WorkerView> workers;
  workers.push_back(dynamic_worker(5, WorkerStatus::Idle, 2));  // borrowable
  workers.push_back(idle_static(6));
  workers.push_back(dynamic_worker(7, WorkerStatus::Idle, 1));  // bound
  workers.push_back(dynamic_worker(8, WorkerStatus::Booting, 1, 500));
  ClusterSnapshot snap = snap_of(1'000, workers, {&qos, &owner}, pool);
  auto out = core.dispatch(snap);
  REQUIRE(out.size() == 3);  // booting worker takes nothing
  CHECK(out[0].worker_id == 7);  // bound to the job wins
  CHECK(out[1].worker_id == 6);  // static next
  CHECK(out[2].worker_id == 5);  // borrowed last
}

TEST_CASE("dispatch borrows another job's workers only when safe") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job qos = make_job(1, 1, 100'000, 900'000, 10);
  Job owner = make_job(2, 1, 100'000, 900'000, 0);

  // Live owner with queued work: its bound idle worker is off limits.
  {
    ClusterSnapshot snap = snap_of(
        1'000, {dynamic_worker(5, WorkerStatus::Idle, 2)}, {&qos, &owner},
        pool);
    auto out = core.dispatch(snap);
    REQUIRE(out.size() == 1);
    CHECK(out[0].job_id == 2);  // the owner itself uses it
  }
  // Owner finished: borrowable.
  {
    Job done = owner;
    done.state = JobState::Finished;
    done.tasks[0].status = TaskStatus::Done;
    ClusterSnapshot snap = snap_of(
        1'000, {dynamic_worker(5, WorkerStatus::Idle, 2)}, {&qos, &done},
        pool);
    auto out = core.dispatch(snap);
    REQUIRE(out.size() == 1);
    CHECK(out[0].job_id == 1);
    CHECK(out[0].worker_id == 5);
  }
  // Owner live with an empty queue: only QoS tasks may borrow.
  {
    Job waiting = owner;
    waiting.tasks[0].status = TaskStatus::Running;
    Job regular = make_job(3, 1, 100'000, std::nullopt, 0);
    ClusterSnapshot snap = snap_of(
        1'000, {dynamic_worker(5, WorkerStatus::Idle, 2)},
        {&qos, &waiting, &regular}, pool);
    auto out = core.dispatch(snap);
    REQUIRE(out.size() == 1);
    CHECK(out[0].job_id == 1);  // the QoS task, not the regular one
  }
  // Releasable workers are fair game for anyone.
  {
    Job regular = make_job(3, 1, 100'000, std::nullopt, 0);
    WorkerView leaving = dynamic_worker(5, WorkerStatus::Idle, 2);
    leaving.releasable = true;
    ClusterSnapshot snap = snap_of(1'000, {leaving}, {&regular}, pool);
    auto out = core.dispatch(snap);
    REQUIRE(out.size() == 1);
    CHECK(out[0].job_id == 3);
    CHECK(out[0].worker_id == 5);
  }
  // Workers named in newly_released rank as leaving too.
  {
    ClusterSnapshot snap = snap_of(
        1'000,
        {dynamic_worker(5, WorkerStatus::Idle, 1), idle_static(6)},
        {&qos}, pool);
    auto out = core.dispatch(snap, {5});
    REQUIRE(out.size() == 1);
    CHECK(out[0].worker_id == 6);  // static beats the leaving bound worker
  }
}

TEST_CASE("select_releasable prefers idle workers nearest their boundary") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 4, 100'000, 20'000'000);
  const SimTime now = 10'000'000;
  std::vector<WorkerView> workers;
  workers.push_back(
      dynamic_worker(10, WorkerStatus::Idle, 1, 0, 9'000'000));
  workers.push_back(
      dynamic_worker(11, WorkerStatus::Idle, 1, 0, 7'000'000));
  {
    WorkerView w = busy_worker(12, WorkerOrigin::Dynamic, 1, 1, 10'500'000);
    w.bound_job = 1;
    w.lease_start = 8'000'000;
    workers.push_back(w);
  }
  workers.push_back(
      dynamic_worker(13, WorkerStatus::Idle, 1, 0, 6'400'000));
  {
    WorkerView w = dynamic_worker(14, WorkerStatus::Idle, 1, 0, 7'000'000);
    w.releasable = true;  // already leaving, never reselected
    workers.push_back(w);
  }
  workers.push_back(dynamic_worker(15, WorkerStatus::Idle, 2));  // other job
  ClusterSnapshot snap = snap_of(now, workers, {&job}, pool);

  // Elapsed in period: w11 3.0e6, w10 1.0e6, w13 0 (a full period elapsed).
  CHECK(core.select_releasable(job, snap, 2) ==
        std::vector<WorkerId>{11, 10});
  CHECK(core.select_releasable(job, snap, 10) ==
        std::vector<WorkerId>{11, 10, 13, 12});
  CHECK(core.select_releasable(job, snap, 0).empty());
}

template <typename T>
const T* action_as(const std::vector<SchedulerAction>& actions,
                   std::size_t i) {
  if (i >= actions.size()) return nullptr;
  return std::get_if<T>(&actions[i]);
}

TEST_CASE("evaluation requests the minimal fleet for a missed deadline") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 120, 120'000, 2'700'000);
  ClusterSnapshot snap = snap_of(
      0, {idle_static(1), idle_static(2), idle_static(3), idle_static(4)},
      {&job}, pool);
  auto actions = core.on_job_event(EvaluateCause::JobArrival, job, snap, pool,
                                   ProvisioningPolicy::CostOptimization);
  REQUIRE(actions.size() >= 2);
  const auto* state = action_as<SetJobState>(actions, 0);
  REQUIRE(state != nullptr);
  CHECK(state->trigger == JobTrigger::DeadlineAtRisk);
  const auto* req = action_as<RequestResources>(actions, 1);
  REQUIRE(req != nullptr);
  CHECK(req->count == 2);
  CHECK(req->pool_id == 1);
  // The same evaluation dispatches the four idle statics.
  CHECK(actions.size() == 2 + 4);
  for (std::size_t i = 2; i < actions.size(); ++i) {
    CHECK(action_as<DispatchTask>(actions, i) != nullptr);
  }
}

TEST_CASE("evaluation marks safe jobs and leaves Provisioned alone") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 4, 120'000, 5'000'000);
  ClusterSnapshot snap = snap_of(
      0, {idle_static(1), idle_static(2), idle_static(3), idle_static(4)},
      {&job}, pool);
  auto actions = core.on_job_event(EvaluateCause::JobArrival, job, snap, pool,
                                   ProvisioningPolicy::CostOptimization);
  const auto* state = action_as<SetJobState>(actions, 0);
  REQUIRE(state != nullptr);
  CHECK(state->trigger == JobTrigger::DeadlineSafe);
  CHECK(actions.size() == 1 + 4);

  job.state = JobState::Provisioned;
  auto again = core.on_job_event(EvaluateCause::ResourceChange, job, snap,
                                 pool, ProvisioningPolicy::CostOptimization);
  CHECK(again.size() == 4);  // dispatch only, no redundant state change
  CHECK(action_as<DispatchTask>(again, 0) != nullptr);
}

TEST_CASE("evaluation sends a QoS job with no usable worker to the queue") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 2, 100'000, 2'000'000);
  // Completion is feasible through a booting bound worker, but nothing is
  // idle right now.
  ClusterSnapshot snap = snap_of(
      1'000,
      {dynamic_worker(5, WorkerStatus::Booting, 1, 50'000),
       busy_worker(6, WorkerOrigin::Static, 2, 1, 400'000)},
      {&job}, pool);
  auto actions = core.on_job_event(EvaluateCause::JobArrival, job, snap, pool,
                                   ProvisioningPolicy::CostOptimization);
  REQUIRE(actions.size() == 1);
  const auto* state = action_as<SetJobState>(actions, 0);
  REQUIRE(state != nullptr);
  CHECK(state->trigger == JobTrigger::NoCapacity);
}

TEST_CASE("evaluation declares impossibility once and recovers later") {
  SchedulerCore core;
  PoolView pool = make_pool(0);  // no headroom at first
  Job job = make_job(1, 6, 120'000, 300'000);
  ClusterSnapshot snap = snap_of(0, {idle_static(1)}, {&job}, pool);
  auto actions = core.on_job_event(EvaluateCause::JobArrival, job, snap, pool,
                                   ProvisioningPolicy::CostOptimization);
  REQUIRE(actions.size() >= 2);
  CHECK(action_as<SetJobState>(actions, 0)->trigger ==
        JobTrigger::DeadlineAtRisk);
  CHECK(action_as<SetJobState>(actions, 1)->trigger ==
        JobTrigger::DeadlineImpossible);

  // Already Underprovisioned: only the impossibility edge fires.
  job.state = JobState::Underprovisioned;
  auto again = core.on_job_event(EvaluateCause::ResourceChange, job, snap,
                                 pool, ProvisioningPolicy::CostOptimization);
  CHECK(action_as<SetJobState>(again, 0)->trigger ==
        JobTrigger::DeadlineImpossible);

  // While Unfeasible with no way out, nothing but dispatch happens.
  job.state = JobState::Unfeasible;
  auto stuck = core.on_job_event(EvaluateCause::ResourceChange, job, snap,
                                 pool, ProvisioningPolicy::CostOptimization);
  CHECK(stuck.size() == 1);  // the lone dispatch to the idle static

  // Headroom appears (e.g. another job released its fleet): recovery
  // re-enters Underprovisioned and requests workers.
  PoolView freed = make_pool(100);
  Job longer = make_job(2, 6, 120'000, 500'000);
  longer.state = JobState::Unfeasible;
  core.update_estimate(longer, 120'000);
  ClusterSnapshot snap2 = snap_of(0, {idle_static(1)}, {&longer}, freed);
  auto recovered =
      core.on_job_event(EvaluateCause::ResourceChange, longer, snap2, freed,
                        ProvisioningPolicy::CostOptimization);
  REQUIRE(recovered.size() >= 3);
  CHECK(action_as<SetJobState>(recovered, 0)->trigger ==
        JobTrigger::EarlyCompletionRecovery);
  CHECK(action_as<SetJobState>(recovered, 1)->trigger ==
        JobTrigger::DeadlineAtRisk);
  CHECK(action_as<RequestResources>(recovered, 2)->count ==
        *core.required_extra(longer, snap2, freed,
                             ProvisioningPolicy::CostOptimization));
}

TEST_CASE("an unfeasible job whose estimate drops recovers as safe") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 2, 400'000, 300'000);
  job.state = JobState::Unfeasible;
  ClusterSnapshot snap =
      snap_of(0, {idle_static(1), idle_static(2)}, {&job}, pool);
  const bool changed = core.update_estimate(job, 100'000) != 400'000;
  auto actions =
      core.on_job_event(EvaluateCause::TaskFinish, job, snap, pool,
                        ProvisioningPolicy::CostOptimization, changed);
  // Mean collapses to 100 s, so both tasks fit the 300 s deadline in one
  // wave.
  REQUIRE(actions.size() >= 2);
  CHECK(action_as<SetJobState>(actions, 0)->trigger ==
        JobTrigger::EarlyCompletionRecovery);
  CHECK(action_as<SetJobState>(actions, 1)->trigger ==
        JobTrigger::DeadlineSafe);
}

TEST_CASE("a dropped estimate releases bound workers the deadline spares") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 5, 600'000, 1'000'000);
  job.state = JobState::Provisioned;
  job.tasks[4].status = TaskStatus::Done;
  const SimTime now = 600'000;
  std::vector<WorkerView> workers;
  workers.push_back(idle_static(1));
  workers.push_back(idle_static(2));
  workers.push_back(dynamic_worker(11, WorkerStatus::Idle, 1, 0, 0));
  workers.push_back(dynamic_worker(12, WorkerStatus::Idle, 1, 0, 0));
  ClusterSnapshot snap = snap_of(now, workers, {&job}, pool);

  const bool changed = core.update_estimate(job, 60'000) != 600'000;
  auto actions =
      core.on_job_event(EvaluateCause::TaskFinish, job, snap, pool,
                        ProvisioningPolicy::CostOptimization, changed);
  // New estimate 60 s: two statics alone finish 4 tasks by 720 s, within the
  // deadline, so both bound dynamics go.
  REQUIRE(actions.size() >= 1);
  const auto* rel = action_as<ReleaseResources>(actions, 0);
  REQUIRE(rel != nullptr);
  CHECK(rel->worker_ids == std::vector<WorkerId>{11, 12});
  // Dispatch fills the statics; the job never reuses workers it just let go
  // (other jobs may scavenge them until the boundary).
  REQUIRE(actions.size() == 1 + 2);
  const WorkerId want[] = {1, 2};
  for (int i = 0; i < 2; ++i) {
    const auto* d = action_as<DispatchTask>(actions, 1 + i);
    REQUIRE(d != nullptr);
    CHECK(d->worker_id == want[i]);
  }

  // An unchanged estimate never triggers a release.
  SchedulerCore fresh;
  Job same = make_job(2, 5, 60'000, 1'000'000);
  same.state = JobState::Provisioned;
  same.tasks[4].status = TaskStatus::Done;
  fresh.update_estimate(same, 60'000);
  std::vector<WorkerView> workers2 = workers;
  for (auto& w : workers2) {
    if (w.bound_job) w.bound_job = 2;
  }
  ClusterSnapshot snap2 = snap_of(now, workers2, {&same}, pool);
  const Duration before2 = fresh.current_estimate(same);
  const bool changed2 = fresh.update_estimate(same, 60'000) != before2;
  auto quiet =
      fresh.on_job_event(EvaluateCause::TaskFinish, same, snap2, pool,
                         ProvisioningPolicy::CostOptimization, changed2);
  for (const auto& a : quiet) {
    CHECK(std::get_if<ReleaseResources>(&a) == nullptr);
  }
}

TEST_CASE("time policy releases only idle workers beyond one per task") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 6, 300'000, 2'000'000);
  job.state = JobState::Provisioned;
  for (int i = 0; i < 4; ++i) job.tasks[i].status = TaskStatus::Done;
  // Two tasks remain; four idle bound workers means two are surplus.
  std::vector<WorkerView> workers;
  for (WorkerId id = 11; id <= 14; ++id) {
    workers.push_back(dynamic_worker(id, WorkerStatus::Idle, 1, 0,
                                     (id - 11) * 100'000));
  }
  ClusterSnapshot snap = snap_of(1'000'000, workers, {&job}, pool);
  const bool changed = core.update_estimate(job, 250'000) != 300'000;
  auto actions =
      core.on_job_event(EvaluateCause::TaskFinish, job, snap, pool,
                        ProvisioningPolicy::TimeOptimization, changed);
  REQUIRE(!actions.empty());
  const auto* rel = action_as<ReleaseResources>(actions, 0);
  REQUIRE(rel != nullptr);
  CHECK(rel->worker_ids.size() == 2);
  // Largest elapsed-in-period leave first: leases started latest have the
  // most elapsed here (now - lease_start mod period).
  CHECK(rel->worker_ids == std::vector<WorkerId>{11, 12});
}

TEST_CASE("regular jobs only ever produce dispatches") {
  SchedulerCore core;
  PoolView pool = make_pool();
  Job job = make_job(1, 3, 100'000, std::nullopt);
  ClusterSnapshot snap =
      snap_of(0, {idle_static(1), idle_static(2)}, {&job}, pool);
  const bool changed = core.update_estimate(job, 90'000) != 100'000;
  auto actions =
      core.on_job_event(EvaluateCause::TaskFinish, job, snap, pool,
                        ProvisioningPolicy::CostOptimization, changed);
  REQUIRE(actions.size() == 2);
  CHECK(action_as<DispatchTask>(actions, 0) != nullptr);
  CHECK(action_as<DispatchTask>(actions, 1) != nullptr);
}

}  // namespace
}  // namespace slasim
