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

#include <map>
#include <optional>
#include <vector>

#include "slasim/domain.hpp"

namespace slasim {

// Daily recurring surcharge window, multiplier expressed as a rational so
// prices stay exact in integer micro-dollars.
struct PeakWindow {
  Duration day_start = 0;  // offset from midnight, inclusive
  Duration day_end = 0;    // exclusive
  std::int64_t mult_num = 1;
  std::int64_t mult_den = 1;
};

struct PriceSchedule {
  std::vector<PeakWindow> windows;
};

// Posted price of the billing period starting at period_start: the pool base
// price times the multiplier of the window containing the period start (first
// match wins), rounded half up to a micro-dollar.
Money period_price(Money base_price, SimTime period_start,
                   const PriceSchedule& schedule);

// Who a dynamic worker was serving over [start, end): a bound job or nobody.
struct ServingInterval {
  std::optional<JobId> job_id;
  SimTime start = 0;
  SimTime end = 0;
};

struct UsageRecord {
  WorkerId worker_id = 0;
  PoolId pool_id = 0;
  Money base_price = 0;  // pool price per period when the lease closed
  SimTime lease_start = 0;
  SimTime lease_end = 0;
  std::int64_t billed_periods = 0;  // ceiling of lease length over the period
  Money cost = 0;                   // sum of per-period posted prices
  std::vector<ServingInterval> serving;
};

struct SlaRecord {
  JobId job_id = 0;
  SimTime deadline = 0;
  SimTime finished_at = 0;
  bool met = false;
  std::int64_t margin = 0;  // deadline - finished_at, negative when missed
  FinishReason finish_reason = FinishReason::Completed;
};

// Reserved attribution account for periods no job owned.
inline constexpr JobId kSharedAccount = -1;

// Usage metering and SLA bookkeeping: ceiling billing per lease, per-period
// cost attribution to the job bound at each period start, and met/missed
// deadline records.
class Accounting {
 public:
  explicit Accounting(PriceSchedule schedule) : schedule_(std::move(schedule)) {}

  const PriceSchedule& schedule() const { return schedule_; }

  // Bills a closed lease. Charges every started period at its posted price
  // and remembers who was served. lease_end == lease_start bills zero
  // periods (a worker decommissioned the instant it was acquired).
  const UsageRecord& close_lease(WorkerId worker_id, const ResourcePool& pool,
                                 SimTime lease_start, SimTime lease_end,
                                 std::vector<ServingInterval> serving);

  // Records whether a finished QoS job met its deadline (inclusive: finishing
  // exactly at the deadline counts as met). Throws JobNotFinishedError for a
  // job that has not reached Finished.
  const SlaRecord& sla_outcome(const Job& job);

  // Splits every recorded lease cost across jobs: each billing period is owed
  // by the job bound to the worker at the period start, or kSharedAccount
  // when unbound.
  std::map<JobId, Money> job_cost_attribution() const;

  Money total_dynamic_cost() const;

  const std::vector<UsageRecord>& usage() const { return usage_; }
  const std::vector<SlaRecord>& sla_history() const { return sla_; }

 private:
  PriceSchedule schedule_;
  std::vector<UsageRecord> usage_;
  std::vector<SlaRecord> sla_;
};

}  // namespace slasim
