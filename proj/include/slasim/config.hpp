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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slasim/accounting.hpp"
#include "slasim/domain.hpp"
#include "slasim/scheduler.hpp"

namespace slasim {

struct PoolConfig {
  PoolId pool_id = 0;
  std::string name;
  Duration boot_delay = 0;
  Duration billing_period = 0;
  Money price_per_period = 0;
  int max_instances = 0;
};

struct ClusterConfig {
  int static_workers = 0;
  std::vector<PoolConfig> pools;
  PoolId default_pool = 0;
  ProvisioningPolicy policy = ProvisioningPolicy::CostOptimization;
  bool strict_admission = false;
  int max_task_attempts = 3;
  PriceSchedule price_schedule;
};

// Task runtime generator: a constant, or an integer uniform draw per task.
struct RuntimeSpec {
  bool uniform = false;
  Duration fixed = 0;
  Duration lo = 0;
  Duration hi = 0;

  // Deterministic per-task draw keyed by (seed, job, task).
  Duration realize(std::uint64_t seed, JobId job_id, TaskId task_id) const;
};

struct JobSpec {
  JobId job_id = 0;
  SimTime arrival = 0;
  int task_count = 0;
  Duration estimated_runtime = 0;  // user-provided per-task estimate
  RuntimeSpec actual_runtime;
  std::optional<Duration> deadline;  // offset from arrival; present == QoS
};

struct InjectedEvent {
  enum class Kind { CancelJob, WorkerFailure };
  Kind kind = Kind::CancelJob;
  SimTime at = 0;
  JobId job_id = -1;
  WorkerId worker_id = -1;
};

struct WorkloadSpec {
  std::vector<JobSpec> jobs;
  std::vector<InjectedEvent> injected;
  std::uint64_t seed = 0;
};

ResourcePool to_resource_pool(const PoolConfig& cfg);

// Strict parsers: unknown keys, wrong types, and out-of-range values raise
// SchemaError carrying a path like "pools[0].boot_delay".
ClusterConfig parse_cluster_config(const std::string& json_text);
WorkloadSpec parse_workload_spec(const std::string& json_text);

ClusterConfig load_cluster_config(const std::filesystem::path& path);
WorkloadSpec load_workload_spec(const std::filesystem::path& path);

// "0.085" -> 85000 micro-dollars. At most six fraction digits.
Money parse_usd(const std::string& text, const std::string& field_path);

// "09:30" or "09:30:15" -> offset from midnight.
Duration parse_day_time(const std::string& text, const std::string& field_path);

}  // namespace slasim
