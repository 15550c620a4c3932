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

#include "slasim/workbench.hpp"

#include <sstream>

namespace slasim {

const std::vector<BenchmarkScenario>& benchmark_scenarios() {
  static const std::vector<BenchmarkScenario> rows = {
      {"no-deadline", std::nullopt, 3658 * kSecond, 0, 0},
      {"deadline-45m", minutes(45), 2466 * kSecond, 2, 170000},
      {"deadline-30m", minutes(30), 1704 * kSecond, 6, 510000},
      {"deadline-15m", minutes(15), 858 * kSecond, 20, 1700000},
  };
  return rows;
}

ClusterConfig benchmark_cluster(ProvisioningPolicy policy, Duration boot_delay) {
  ClusterConfig cfg;
  cfg.static_workers = 4;
  PoolConfig pool;
  pool.pool_id = 1;
  pool.name = "on-demand";
  pool.boot_delay = boot_delay;
  pool.billing_period = kHour;
  pool.price_per_period = 85000;  // US$ 0.085
  pool.max_instances = 1000;
  cfg.pools.push_back(pool);
  cfg.default_pool = 1;
  cfg.policy = policy;
  return cfg;
}

WorkloadSpec benchmark_workload(std::optional<Duration> deadline) {
  WorkloadSpec wl;
  JobSpec job;
  job.job_id = 1;
  job.arrival = 0;
  job.task_count = 120;
  job.estimated_runtime = 120 * kSecond;
  job.actual_runtime.fixed = 120 * kSecond;
  job.deadline = deadline;
  wl.jobs.push_back(job);
  return wl;
}

std::vector<BenchmarkRow> run_benchmark(const std::filesystem::path& out_dir,
                                        ProvisioningPolicy policy,
                                        std::optional<Duration> boot_delay_override) {
  std::vector<BenchmarkRow> rows;
  for (const auto& scenario : benchmark_scenarios()) {
    const ClusterConfig cfg = benchmark_cluster(
        policy, boot_delay_override.value_or(90 * kSecond));
    const WorkloadSpec wl = benchmark_workload(scenario.deadline);
    const RunReport report = run_scenario(cfg, wl, out_dir / scenario.name);
    BenchmarkRow row;
    row.scenario = scenario;
    row.totals = report.totals;
    for (const auto& j : report.jobs) {
      if (j.sla_met) row.sla_met = *j.sla_met;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string benchmark_table_text(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream out;
  out << "scenario       statics  dynamics  makespan  cost       sla    "
         "reference(time/dynamics/cost)\n";
  for (const auto& r : rows) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "%-14s %7d  %8d  %8s  %-9s  %-5s  %s / %d / %s\n",
                  r.scenario.name.c_str(), 4,
                  r.totals.dynamic_workers_acquired,
                  format_hms(r.totals.makespan).c_str(),
                  format_usd(r.totals.extra_cost).c_str(),
                  r.scenario.deadline ? (r.sla_met ? "met" : "MISS") : "-",
                  format_hms(r.scenario.reference_makespan).c_str(),
                  r.scenario.reference_dynamic,
                  format_usd(r.scenario.reference_cost).c_str());
    out << line;
  }
  return out.str();
}

PolicyComparison compare_policies(const ClusterConfig& config,
                                  const WorkloadSpec& workload,
                                  const std::filesystem::path& out_dir,
                                  RunOptions opts) {
  PolicyComparison pc;
  RunOptions cost = opts;
  cost.policy_override = ProvisioningPolicy::CostOptimization;
  pc.cost = run_scenario(config, workload, out_dir / "cost", cost);
  RunOptions time = opts;
  time.policy_override = ProvisioningPolicy::TimeOptimization;
  pc.time = run_scenario(config, workload, out_dir / "time", time);
  return pc;
}

std::string comparison_text(const PolicyComparison& pc) {
  std::ostringstream out;
  auto line = [&](const char* name, const RunReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%-5s  makespan=%-10s dynamics=%-4d extra_cost=%-10s "
                  "qos_met=%d qos_missed=%d\n",
                  name, format_hms(r.totals.makespan).c_str(),
                  r.totals.dynamic_workers_acquired,
                  format_usd(r.totals.extra_cost).c_str(), r.totals.qos_met,
                  r.totals.qos_missed);
    out << buf;
  };
  line("cost", pc.cost);
  line("time", pc.time);
  return out.str();
}

}  // namespace slasim
