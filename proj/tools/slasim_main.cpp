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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "slasim/config.hpp"
#include "slasim/errors.hpp"
#include "slasim/workbench.hpp"

namespace {

using namespace slasim;

RunOptions make_options(const std::string& policy, std::int64_t seed,
                        bool seed_set, const std::string& boot_override) {
  RunOptions opts;
  if (policy == "cost") {
    opts.policy_override = ProvisioningPolicy::CostOptimization;
  } else if (policy == "time") {
    opts.policy_override = ProvisioningPolicy::TimeOptimization;
  } else if (!policy.empty()) {
    throw SchemaError("--policy", "expected \"cost\" or \"time\"");
  }
  if (seed_set) {
    if (seed < 0) throw SchemaError("--seed", "must not be negative");
    opts.seed_override = static_cast<std::uint64_t>(seed);
  }
  if (!boot_override.empty()) {
    opts.boot_delay_override =
        parse_duration(boot_override, "--boot-delay-override", false);
  }
  return opts;
}

void print_summary(const RunReport& r) {
  std::cout << "makespan " << format_hms(r.totals.makespan) << " ("
            << r.totals.makespan << " ms), dynamic workers "
            << r.totals.dynamic_workers_acquired << ", extra cost "
            << format_usd(r.totals.extra_cost) << ", jobs "
            << r.totals.jobs_finished << "/" << r.totals.jobs_total
            << " finished, qos " << r.totals.qos_met << " met / "
            << r.totals.qos_missed << " missed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slasim: deadline-driven dynamic provisioning simulator"};
  app.require_subcommand(1);

  std::string cluster_path, workload_path, out_dir;
  std::string policy, boot_override;
  std::int64_t seed = 0;

  CLI::App* run_cmd =
      app.add_subcommand("run", "simulate one cluster + workload pair");
  run_cmd->add_option("--cluster", cluster_path, "cluster config JSON")
      ->required();
  run_cmd->add_option("--workload", workload_path, "workload JSON")->required();
  run_cmd->add_option("--out", out_dir, "output directory")->required();
  run_cmd->add_option("--policy", policy, "provisioning policy: cost or time");
  CLI::Option* run_seed = run_cmd->add_option("--seed", seed, "seed override");
  run_cmd->add_option("--boot-delay-override", boot_override,
                      "boot delay for every pool, e.g. 90s");

  CLI::App* table_cmd = app.add_subcommand(
      "table1", "bundled deadline-sweep benchmark (4 scenarios)");
  table_cmd->add_option("--out", out_dir, "output directory")->required();
  table_cmd->add_option("--policy", policy, "provisioning policy");
  table_cmd->add_option("--boot-delay-override", boot_override,
                        "boot delay, e.g. 90s");

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "run a workload under both provisioning policies");
  compare_cmd->add_option("--cluster", cluster_path, "cluster config JSON")
      ->required();
  compare_cmd->add_option("--workload", workload_path, "workload JSON")
      ->required();
  compare_cmd->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* cmp_seed =
      compare_cmd->add_option("--seed", seed, "seed override");
  compare_cmd->add_option("--boot-delay-override", boot_override,
                          "boot delay, e.g. 90s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      const RunOptions opts =
          make_options(policy, seed, run_seed->count() > 0, boot_override);
      const ClusterConfig cfg = load_cluster_config(cluster_path);
      const WorkloadSpec wl = load_workload_spec(workload_path);
      const RunReport report = run_scenario(cfg, wl, out_dir, opts);
      print_summary(report);
    } else if (table_cmd->parsed()) {
      const RunOptions opts = make_options(policy, 0, false, boot_override);
      const auto rows = run_benchmark(
          out_dir,
          opts.policy_override.value_or(ProvisioningPolicy::CostOptimization),
          opts.boot_delay_override);
      std::cout << benchmark_table_text(rows);
    } else if (compare_cmd->parsed()) {
      const RunOptions opts =
          make_options("", seed, cmp_seed->count() > 0, boot_override);
      const ClusterConfig cfg = load_cluster_config(cluster_path);
      const WorkloadSpec wl = load_workload_spec(workload_path);
      const PolicyComparison pc = compare_policies(cfg, wl, out_dir, opts);
      std::cout << comparison_text(pc);
    }
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SimFault& e) {
    std::cerr << "simulator fault: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "simulator fault: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
