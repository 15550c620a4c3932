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

#include <array>
#include <functional>

#include "slasim/errors.hpp"
#include "slasim/event.hpp"

namespace slasim {

// One handler per event kind. run_until_drained refuses to start unless every
// kind has one.
using EventHandler = std::function<void(const Event&)>;

class HandlerSet {
 public:
  void set(EventKind kind, EventHandler handler) {
    handlers_[static_cast<std::size_t>(kind)] = std::move(handler);
  }
  const EventHandler& get(EventKind kind) const {
    return handlers_[static_cast<std::size_t>(kind)];
  }
  bool complete() const {
    for (const auto& h : handlers_) {
      if (!h) return false;
    }
    return true;
  }

 private:
  std::array<EventHandler, 7> handlers_;
};

// Deterministic virtual-time discrete-event kernel. Single logical thread of
// control; all inter-service traffic flows through here as events.
class SimKernel {
 public:
  SimTime now() const { return now_; }

  // Enqueues an event; fire_at must not precede the clock.
  EventId schedule(SimTime fire_at, EventPayload payload);

  // True iff the event was pending and is now removed.
  bool cancel(EventId id) { return queue_.cancel(id); }

  // Pops events in deterministic order, advancing the clock to each fire_at,
  // until the queue drains or a SimEnd event fires (its handler still runs).
  // Returns the final clock value. Handler exceptions surface as HandlerFault.
  SimTime run_until_drained(const HandlerSet& handlers);

  const EventQueue& queue() const { return queue_; }

 private:
  EventQueue queue_;
  SimTime now_ = 0;
};

}  // namespace slasim
