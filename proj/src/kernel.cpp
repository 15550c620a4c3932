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

#include "slasim/kernel.hpp"

#include <string>

namespace slasim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::WorkerBootComplete: return "WorkerBootComplete";
    case EventKind::TaskFinish: return "TaskFinish";
    case EventKind::JobArrival: return "JobArrival";
    case EventKind::JobCancel: return "JobCancel";
    case EventKind::WorkerFailure: return "WorkerFailure";
    case EventKind::BillingBoundary: return "BillingBoundary";
    case EventKind::SimEnd: return "SimEnd";
  }
  return "?";
}

EventId EventQueue::push(SimTime fire_at, EventPayload payload) {
  const EventId id = next_id_++;
  const Key key{fire_at, static_cast<int>(kind_of(payload)), id};
  pending_.emplace(key, Event{fire_at, id, std::move(payload)});
  index_.emplace(id, key);
  return id;
}

bool EventQueue::cancel(EventId id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  pending_.erase(it->second);
  index_.erase(it);
  return true;
}

Event EventQueue::pop() {
  auto it = pending_.begin();
  Event ev = std::move(it->second);
  index_.erase(ev.id);
  pending_.erase(it);
  return ev;
}

EventId SimKernel::schedule(SimTime fire_at, EventPayload payload) {
  if (fire_at < now_) {
    throw PastTimeError("schedule at t=" + std::to_string(fire_at) +
                        " before clock t=" + std::to_string(now_));
  }
  return queue_.push(fire_at, std::move(payload));
}

SimTime SimKernel::run_until_drained(const HandlerSet& handlers) {
  if (!handlers.complete()) {
    throw HandlerFault("run_until_drained requires a handler per event kind");
  }
  while (!queue_.empty()) {
    Event ev = queue_.pop();
    now_ = ev.fire_at;
    try {
      handlers.get(ev.kind())(ev);
    } catch (const SimFault&) {
      throw;
    } catch (const std::exception& e) {
      throw HandlerFault(std::string(to_string(ev.kind())) +
                         " handler at t=" + std::to_string(now_) + ": " +
                         e.what());
    }
    if (ev.kind() == EventKind::SimEnd) break;
  }
  return now_;
}

}  // namespace slasim
