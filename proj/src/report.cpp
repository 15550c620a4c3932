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

#include "slasim/report.hpp"

#include <fstream>

#include "json.hpp"
#include "slasim/errors.hpp"

namespace slasim {

namespace {

using json = nlohmann::ordered_json;

std::string pool_name(const ClusterConfig& cfg, PoolId id) {
  for (const auto& p : cfg.pools) {
    if (p.pool_id == id) return p.name;
  }
  return "";
}

}  // namespace

std::string summary_json_text(const RunReport& report) {
  json doc;
  doc["schema"] = "slasim-summary-1";
  doc["policy"] = to_string(report.config.policy);
  doc["seed"] = report.seed;

  json totals;
  totals["makespan_ms"] = report.totals.makespan;
  totals["makespan"] = format_hms(report.totals.makespan);
  totals["drained_at_ms"] = report.totals.drained_at;
  totals["dynamic_workers_acquired"] = report.totals.dynamic_workers_acquired;
  totals["extra_cost_microusd"] = report.totals.extra_cost;
  totals["extra_cost"] = format_usd(report.totals.extra_cost);
  totals["static_cost_microusd"] = report.totals.static_cost;
  totals["shared_cost_microusd"] = report.totals.shared_cost;
  totals["jobs_total"] = report.totals.jobs_total;
  totals["jobs_finished"] = report.totals.jobs_finished;
  totals["jobs_rejected"] = report.totals.jobs_rejected;
  totals["qos_met"] = report.totals.qos_met;
  totals["qos_missed"] = report.totals.qos_missed;
  doc["totals"] = std::move(totals);

  json jobs = json::array();
  for (const auto& j : report.jobs) {
    json row;
    row["job_id"] = j.job_id;
    row["qos"] = j.qos;
    row["state"] = to_string(j.final_state);
    row["submitted_at_ms"] = j.submitted_at;
    if (j.deadline_at) row["deadline_at_ms"] = *j.deadline_at;
    if (j.finished_at) row["finished_at_ms"] = *j.finished_at;
    if (j.finish_reason) row["finish_reason"] = to_string(*j.finish_reason);
    if (j.sla_met) row["sla_met"] = *j.sla_met;
    row["tasks_total"] = j.tasks_total;
    row["tasks_done"] = j.tasks_done;
    jobs.push_back(std::move(row));
  }
  doc["jobs"] = std::move(jobs);

  json workers = json::array();
  for (const auto& w : report.workers) {
    json row;
    row["worker_id"] = w.worker_id;
    row["origin"] = to_string(w.origin);
    if (w.origin == WorkerOrigin::Dynamic) {
      row["pool"] = pool_name(report.config, w.pool_id);
      row["lease_start_ms"] = w.lease_start;
      if (w.lease_end) row["lease_end_ms"] = *w.lease_end;
      row["billed_periods"] = w.billed_periods;
      row["cost_microusd"] = w.cost;
    }
    row["final_status"] = to_string(w.final_status);
    workers.push_back(std::move(row));
  }
  doc["workers"] = std::move(workers);

  json costs;
  for (const auto& [job_id, money] : report.cost_by_job) {
    costs[job_id == kSharedAccount ? "shared" : std::to_string(job_id)] = money;
  }
  doc["cost_by_job"] = std::move(costs);

  return doc.dump(2) + "\n";
}

void write_summary_json(const std::filesystem::path& path,
                        const RunReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimFault("cannot write " + path.string());
  out << summary_json_text(report);
}

void write_jobs_csv(const std::filesystem::path& path, const RunReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimFault("cannot write " + path.string());
  out << "job_id,qos,state,submitted_at,deadline_at,finished_at,finish_reason,"
         "sla_met,tasks_total,tasks_done\n";
  for (const auto& j : report.jobs) {
    out << j.job_id << ',' << (j.qos ? 1 : 0) << ',' << to_string(j.final_state)
        << ',' << j.submitted_at << ',';
    if (j.deadline_at) out << *j.deadline_at;
    out << ',';
    if (j.finished_at) out << *j.finished_at;
    out << ',';
    if (j.finish_reason) out << to_string(*j.finish_reason);
    out << ',';
    if (j.sla_met) out << (*j.sla_met ? 1 : 0);
    out << ',' << j.tasks_total << ',' << j.tasks_done << '\n';
  }
}

void write_workers_csv(const std::filesystem::path& path,
                       const RunReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimFault("cannot write " + path.string());
  out << "worker_id,origin,pool,lease_start,lease_end,billed_periods,"
         "cost_microusd,final_status\n";
  for (const auto& w : report.workers) {
    out << w.worker_id << ',' << to_string(w.origin) << ',';
    if (w.origin == WorkerOrigin::Dynamic) {
      out << pool_name(report.config, w.pool_id) << ',' << w.lease_start << ',';
      if (w.lease_end) out << *w.lease_end;
      out << ',' << w.billed_periods << ',' << w.cost << ',';
    } else {
      out << ",,,,,";
    }
    out << to_string(w.final_status) << '\n';
  }
}

}  // namespace slasim
