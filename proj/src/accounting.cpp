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

#include "slasim/accounting.hpp"

#include <string>

#include "slasim/errors.hpp"

namespace slasim {

Money period_price(Money base_price, SimTime period_start,
                   const PriceSchedule& schedule) {
  const Duration day_offset = ((period_start % kDay) + kDay) % kDay;
  for (const auto& w : schedule.windows) {
    if (day_offset >= w.day_start && day_offset < w.day_end) {
      // round half up
      return (base_price * w.mult_num + w.mult_den / 2) / w.mult_den;
    }
  }
  return base_price;
}

const UsageRecord& Accounting::close_lease(WorkerId worker_id,
                                           const ResourcePool& pool,
                                           SimTime lease_start,
                                           SimTime lease_end,
                                           std::vector<ServingInterval> serving) {
  if (lease_end < lease_start) {
    throw SimFault("lease for worker " + std::to_string(worker_id) +
                   " ends before it starts");
  }
  if ((lease_end - lease_start) % pool.billing_period != 0) {
    throw MisalignedLeaseError("worker " + std::to_string(worker_id) +
                               " lease closed off a billing boundary");
  }
  UsageRecord rec;
  rec.worker_id = worker_id;
  rec.pool_id = pool.pool_id;
  rec.base_price = pool.price_per_period;
  rec.lease_start = lease_start;
  rec.lease_end = lease_end;
  rec.billed_periods = (lease_end - lease_start) / pool.billing_period;
  for (std::int64_t k = 0; k < rec.billed_periods; ++k) {
    rec.cost += period_price(pool.price_per_period,
                             lease_start + k * pool.billing_period, schedule_);
  }
  rec.serving = std::move(serving);
  usage_.push_back(std::move(rec));
  return usage_.back();
}

const SlaRecord& Accounting::sla_outcome(const Job& job) {
  if (!job.finished() || !job.finished_at) {
    throw JobNotFinishedError("job " + std::to_string(job.job_id) +
                              " has no finish time yet");
  }
  SlaRecord rec;
  rec.job_id = job.job_id;
  rec.deadline = job.deadline.value_or(0);
  rec.finished_at = *job.finished_at;
  rec.met = job.deadline ? *job.finished_at <= *job.deadline : true;
  rec.margin = rec.deadline - rec.finished_at;
  rec.finish_reason = job.finish_reason.value_or(FinishReason::Completed);
  sla_.push_back(rec);
  return sla_.back();
}

std::map<JobId, Money> Accounting::job_cost_attribution() const {
  std::map<JobId, Money> owed;
  for (const auto& rec : usage_) {
    if (rec.billed_periods == 0) continue;
    const Duration period =
        (rec.lease_end - rec.lease_start) / rec.billed_periods;
    for (std::int64_t k = 0; k < rec.billed_periods; ++k) {
      const SimTime start = rec.lease_start + k * period;
      JobId owner = kSharedAccount;
      for (const auto& iv : rec.serving) {
        if (iv.start <= start && start < iv.end && iv.job_id) {
          owner = *iv.job_id;
          break;
        }
      }
      owed[owner] += period_price(rec.base_price, start, schedule_);
    }
  }
  return owed;
}

Money Accounting::total_dynamic_cost() const {
  Money total = 0;
  for (const auto& rec : usage_) total += rec.cost;
  return total;
}

}  // namespace slasim
