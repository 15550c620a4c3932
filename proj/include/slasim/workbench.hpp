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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slasim/simulation.hpp"

namespace slasim {

// Canned deadline-sweep benchmark: one 120-task bag of 120 s tasks on four
// static workers with one on-demand pool, swept over no deadline, 45, 30 and
// 15 minutes. Reference columns are prior measurements of the same sweep on a
// live testbed with real boot jitter; they are reported beside the simulated
// numbers, not asserted against.
struct BenchmarkScenario {
  std::string name;
  std::optional<Duration> deadline;
  Duration reference_makespan = 0;
  int reference_dynamic = 0;
  Money reference_cost = 0;
};

const std::vector<BenchmarkScenario>& benchmark_scenarios();

ClusterConfig benchmark_cluster(
    ProvisioningPolicy policy = ProvisioningPolicy::CostOptimization,
    Duration boot_delay = 90 * kSecond);
WorkloadSpec benchmark_workload(std::optional<Duration> deadline);

struct BenchmarkRow {
  BenchmarkScenario scenario;
  RunTotals totals;
  bool sla_met = true;  // true for the no-deadline row
};

// Runs the sweep, writing one scenario directory per row under out_dir.
std::vector<BenchmarkRow> run_benchmark(
    const std::filesystem::path& out_dir,
    ProvisioningPolicy policy = ProvisioningPolicy::CostOptimization,
    std::optional<Duration> boot_delay_override = std::nullopt);

std::string benchmark_table_text(const std::vector<BenchmarkRow>& rows);

struct PolicyComparison {
  RunReport cost;
  RunReport time;
};

// Same cluster and workload under both provisioning policies, written to
// out_dir/cost and out_dir/time.
PolicyComparison compare_policies(const ClusterConfig& config,
                                  const WorkloadSpec& workload,
                                  const std::filesystem::path& out_dir,
                                  RunOptions opts = {});

std::string comparison_text(const PolicyComparison& pc);

}  // namespace slasim
