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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <variant>

#include "slasim/time_types.hpp"

namespace slasim {

// Event kinds in tie-break rank order. Two events at the same instant pop in
// this order; boot-completion ahead of task-finish lets a just-booted worker
// pick up a task freed at the same instant.
enum class EventKind : int {
  WorkerBootComplete = 0,
  TaskFinish = 1,
  JobArrival = 2,
  JobCancel = 3,
  WorkerFailure = 4,
  BillingBoundary = 5,
  SimEnd = 6,
};

const char* to_string(EventKind kind);

struct WorkerBootCompleteEvent {
  WorkerId worker_id;
};
struct TaskFinishEvent {
  JobId job_id;
  TaskId task_id;
  WorkerId worker_id;
};
struct JobArrivalEvent {
  JobId job_id;
};
struct JobCancelEvent {
  JobId job_id;
};
struct WorkerFailureEvent {
  WorkerId worker_id;
};
struct BillingBoundaryEvent {
  WorkerId worker_id;
};
struct SimEndEvent {};

// Variant alternatives are ordered so that the index equals the EventKind
// rank; kind_of() relies on this.
using EventPayload =
    std::variant<WorkerBootCompleteEvent, TaskFinishEvent, JobArrivalEvent,
                 JobCancelEvent, WorkerFailureEvent, BillingBoundaryEvent,
                 SimEndEvent>;

inline EventKind kind_of(const EventPayload& payload) {
  return static_cast<EventKind>(payload.index());
}

struct Event {
  SimTime fire_at = 0;
  EventId id = 0;  // scheduling sequence number, unique per run
  EventPayload payload;

  EventKind kind() const { return kind_of(payload); }
};

// Pending events ordered by (fire_at, kind rank, scheduling sequence). Pop
// order is total and deterministic.
class EventQueue {
 public:
  EventId push(SimTime fire_at, EventPayload payload);
  bool cancel(EventId id);

  bool empty() const { return pending_.empty(); }
  std::size_t size() const { return pending_.size(); }

  const Event& front() const { return pending_.begin()->second; }
  Event pop();

 private:
  using Key = std::tuple<SimTime, int, EventId>;

  std::map<Key, Event> pending_;
  std::unordered_map<EventId, Key> index_;
  EventId next_id_ = 1;
};

}  // namespace slasim
