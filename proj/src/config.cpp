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

#include "slasim/config.hpp"

#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "slasim/errors.hpp"

namespace slasim {

namespace {

using json = nlohmann::ordered_json;

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw SchemaError("$", "not valid JSON");
  return doc;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) {
      throw SchemaError(path.empty() ? key : path + "." + key,
                        "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(path.empty() ? key : path + "." + key,
                      "required field is missing");
  }
  return *it;
}

std::int64_t get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected true or false");
  return j.get<bool>();
}

// Durations appear as "90s" style strings or bare integer milliseconds.
Duration get_duration(const json& j, const std::string& path,
                      bool require_positive) {
  if (j.is_number_integer()) {
    const std::int64_t v = j.get<std::int64_t>();
    if (v < 0 || (require_positive && v == 0)) {
      throw SchemaError(path, require_positive
                                  ? "duration must be positive"
                                  : "duration must not be negative");
    }
    return v;
  }
  if (j.is_string()) {
    return parse_duration(j.get<std::string>(), path, require_positive);
  }
  throw SchemaError(path, "expected a duration string or millisecond count");
}

// A positively valued decimal like "1.5" as an exact rational.
void parse_multiplier(const std::string& text, const std::string& path,
                      std::int64_t* num, std::int64_t* den) {
  std::int64_t n = 0, d = 1;
  std::size_t i = 0;
  bool any = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]));
       ++i) {
    n = n * 10 + (text[i] - '0');
    any = true;
  }
  if (i < text.size() && text[i] == '.') {
    for (++i;
         i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]));
         ++i) {
      n = n * 10 + (text[i] - '0');
      d *= 10;
      any = true;
    }
  }
  if (!any || i != text.size() || n <= 0 || d > 1000000) {
    throw SchemaError(path, "expected a positive decimal like \"1.5\", got \"" +
                                text + "\"");
  }
  *num = n;
  *den = d;
}

}  // namespace

Money parse_usd(const std::string& text, const std::string& field_path) {
  std::int64_t dollars = 0;
  std::size_t i = 0;
  bool any = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]));
       ++i) {
    dollars = dollars * 10 + (text[i] - '0');
    any = true;
  }
  Money micros = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    int digits = 0;
    for (; i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i]));
         ++i, ++digits) {
      if (digits >= 6) {
        throw SchemaError(field_path,
                          "at most six fraction digits in \"" + text + "\"");
      }
      micros = micros * 10 + (text[i] - '0');
      any = true;
    }
    for (; digits < 6; ++digits) micros *= 10;
  }
  if (!any || i != text.size()) {
    throw SchemaError(field_path,
                      "expected an amount like \"0.085\", got \"" + text + "\"");
  }
  return dollars * kUsd + micros;
}

Duration parse_day_time(const std::string& text, const std::string& field_path) {
  std::vector<int> parts{0};
  for (char c : text) {
    if (c == ':') {
      parts.push_back(0);
    } else if (std::isdigit(static_cast<unsigned char>(c)) &&
               parts.back() < 1000) {
      parts.back() = parts.back() * 10 + (c - '0');
    } else {
      throw SchemaError(field_path, "expected \"HH:MM\" or \"HH:MM:SS\", got \"" +
                                        text + "\"");
    }
  }
  if (parts.size() == 2) parts.push_back(0);
  if (parts.size() != 3) {
    throw SchemaError(field_path,
                      "expected \"HH:MM\" or \"HH:MM:SS\", got \"" + text + "\"");
  }
  const int h = parts[0], m = parts[1], s = parts[2];
  if (h < 0 || h > 24 || m < 0 || m > 59 || s < 0 || s > 59 ||
      (h == 24 && (m != 0 || s != 0))) {
    throw SchemaError(field_path, "time of day out of range: \"" + text + "\"");
  }
  return hours(h) + minutes(m) + seconds(s);
}

ResourcePool to_resource_pool(const PoolConfig& cfg) {
  ResourcePool p;
  p.pool_id = cfg.pool_id;
  p.boot_delay = cfg.boot_delay;
  p.billing_period = cfg.billing_period;
  p.price_per_period = cfg.price_per_period;
  p.max_instances = cfg.max_instances;
  return p;
}

ClusterConfig parse_cluster_config(const std::string& json_text) {
  const json doc = parse_document(json_text);
  expect_object(doc, "$");
  reject_unknown(doc,
                 {"static_workers", "default_pool", "policy",
                  "strict_admission", "max_task_attempts", "pools",
                  "peak_windows"},
                 "");

  ClusterConfig cfg;
  const std::int64_t statics =
      get_int(require(doc, "static_workers", ""), "static_workers");
  if (statics < 0 || statics > 100000) {
    throw SchemaError("static_workers", "out of range");
  }
  cfg.static_workers = static_cast<int>(statics);

  const json& pools = require(doc, "pools", "");
  if (!pools.is_array() || pools.empty()) {
    throw SchemaError("pools", "expected a non-empty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    const std::string path = "pools[" + std::to_string(i) + "]";
    const json& pj = pools[i];
    expect_object(pj, path);
    reject_unknown(pj,
                   {"name", "boot_delay", "billing_period", "price_per_period",
                    "max_instances"},
                   path);
    PoolConfig pc;
    pc.pool_id = static_cast<PoolId>(i + 1);
    pc.name = get_string(require(pj, "name", path), path + ".name");
    if (pc.name.empty() || !names.insert(pc.name).second) {
      throw SchemaError(path + ".name", "pool names must be unique and non-empty");
    }
    pc.boot_delay = get_duration(require(pj, "boot_delay", path),
                                 path + ".boot_delay", false);
    pc.billing_period = get_duration(require(pj, "billing_period", path),
                                     path + ".billing_period", true);
    pc.price_per_period =
        parse_usd(get_string(require(pj, "price_per_period", path),
                             path + ".price_per_period"),
                  path + ".price_per_period");
    if (pj.contains("max_instances")) {
      const std::int64_t m = get_int(pj["max_instances"], path + ".max_instances");
      if (m < 1 || m > 1000000) {
        throw SchemaError(path + ".max_instances", "out of range");
      }
      pc.max_instances = static_cast<int>(m);
    } else {
      pc.max_instances = 1000000;
    }
    cfg.pools.push_back(std::move(pc));
  }

  const std::string def =
      get_string(require(doc, "default_pool", ""), "default_pool");
  cfg.default_pool = 0;
  for (const auto& p : cfg.pools) {
    if (p.name == def) cfg.default_pool = p.pool_id;
  }
  if (cfg.default_pool == 0) {
    throw SchemaError("default_pool", "no pool named \"" + def + "\"");
  }

  if (doc.contains("policy")) {
    const std::string p = get_string(doc["policy"], "policy");
    if (p == "cost") {
      cfg.policy = ProvisioningPolicy::CostOptimization;
    } else if (p == "time") {
      cfg.policy = ProvisioningPolicy::TimeOptimization;
    } else {
      throw SchemaError("policy", "expected \"cost\" or \"time\"");
    }
  }
  if (doc.contains("strict_admission")) {
    cfg.strict_admission = get_bool(doc["strict_admission"], "strict_admission");
  }
  if (doc.contains("max_task_attempts")) {
    const std::int64_t m = get_int(doc["max_task_attempts"], "max_task_attempts");
    if (m < 1 || m > 100) throw SchemaError("max_task_attempts", "out of range");
    cfg.max_task_attempts = static_cast<int>(m);
  }

  if (doc.contains("peak_windows")) {
    const json& pw = doc["peak_windows"];
    if (!pw.is_array()) throw SchemaError("peak_windows", "expected an array");
    for (std::size_t i = 0; i < pw.size(); ++i) {
      const std::string path = "peak_windows[" + std::to_string(i) + "]";
      expect_object(pw[i], path);
      reject_unknown(pw[i], {"start", "end", "multiplier"}, path);
      PeakWindow w;
      w.day_start = parse_day_time(
          get_string(require(pw[i], "start", path), path + ".start"),
          path + ".start");
      w.day_end = parse_day_time(
          get_string(require(pw[i], "end", path), path + ".end"),
          path + ".end");
      if (w.day_start >= w.day_end) {
        throw SchemaError(path, "start must precede end");
      }
      parse_multiplier(
          get_string(require(pw[i], "multiplier", path), path + ".multiplier"),
          path + ".multiplier", &w.mult_num, &w.mult_den);
      cfg.price_schedule.windows.push_back(w);
    }
  }
  return cfg;
}

Duration RuntimeSpec::realize(std::uint64_t seed, JobId job_id,
                              TaskId task_id) const {
  if (!uniform) return fixed;
  std::mt19937_64 rng(seed * 1000003ull +
                      static_cast<std::uint64_t>(job_id) * 1009ull +
                      static_cast<std::uint64_t>(task_id));
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<Duration>(rng() % span);
}

WorkloadSpec parse_workload_spec(const std::string& json_text) {
  const json doc = parse_document(json_text);
  expect_object(doc, "$");
  reject_unknown(doc, {"jobs", "injected", "seed"}, "");

  WorkloadSpec wl;
  if (doc.contains("seed")) {
    const std::int64_t s = get_int(doc["seed"], "seed");
    if (s < 0) throw SchemaError("seed", "must not be negative");
    wl.seed = static_cast<std::uint64_t>(s);
  }

  const json& jobs = require(doc, "jobs", "");
  if (!jobs.is_array()) throw SchemaError("jobs", "expected an array");
  std::set<JobId> ids;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::string path = "jobs[" + std::to_string(i) + "]";
    const json& jj = jobs[i];
    expect_object(jj, path);
    reject_unknown(jj,
                   {"job_id", "arrival", "task_count", "estimated_runtime",
                    "actual_runtime", "deadline"},
                   path);
    JobSpec spec;
    const std::int64_t id = get_int(require(jj, "job_id", path), path + ".job_id");
    if (id < 1 || id > 1000000000) {
      throw SchemaError(path + ".job_id", "out of range");
    }
    spec.job_id = static_cast<JobId>(id);
    if (!ids.insert(spec.job_id).second) {
      throw SchemaError(path + ".job_id", "duplicate job id");
    }
    spec.arrival =
        get_duration(require(jj, "arrival", path), path + ".arrival", false);
    const std::int64_t tc =
        get_int(require(jj, "task_count", path), path + ".task_count");
    if (tc < 1 || tc > 1000000) {
      throw SchemaError(path + ".task_count", "must be at least 1");
    }
    spec.task_count = static_cast<int>(tc);
    spec.estimated_runtime =
        get_duration(require(jj, "estimated_runtime", path),
                     path + ".estimated_runtime", true);
    const json& ar = require(jj, "actual_runtime", path);
    if (ar.is_object()) {
      reject_unknown(ar, {"lo", "hi"}, path + ".actual_runtime");
      spec.actual_runtime.uniform = true;
      spec.actual_runtime.lo =
          get_duration(require(ar, "lo", path + ".actual_runtime"),
                       path + ".actual_runtime.lo", true);
      spec.actual_runtime.hi =
          get_duration(require(ar, "hi", path + ".actual_runtime"),
                       path + ".actual_runtime.hi", true);
      if (spec.actual_runtime.lo > spec.actual_runtime.hi) {
        throw SchemaError(path + ".actual_runtime", "lo must not exceed hi");
      }
    } else {
      spec.actual_runtime.fixed =
          get_duration(ar, path + ".actual_runtime", true);
    }
    if (jj.contains("deadline")) {
      spec.deadline = get_duration(jj["deadline"], path + ".deadline", true);
    }
    wl.jobs.push_back(std::move(spec));
  }

  if (doc.contains("injected")) {
    const json& inj = doc["injected"];
    if (!inj.is_array()) throw SchemaError("injected", "expected an array");
    for (std::size_t i = 0; i < inj.size(); ++i) {
      const std::string path = "injected[" + std::to_string(i) + "]";
      expect_object(inj[i], path);
      InjectedEvent ev;
      const std::string kind =
          get_string(require(inj[i], "kind", path), path + ".kind");
      ev.at = get_duration(require(inj[i], "at", path), path + ".at", false);
      if (kind == "cancel_job") {
        reject_unknown(inj[i], {"kind", "at", "job_id"}, path);
        ev.kind = InjectedEvent::Kind::CancelJob;
        const std::int64_t id =
            get_int(require(inj[i], "job_id", path), path + ".job_id");
        ev.job_id = static_cast<JobId>(id);
        if (ids.count(ev.job_id) == 0) {
          throw SchemaError(path + ".job_id", "cancels an unknown job");
        }
      } else if (kind == "worker_failure") {
        reject_unknown(inj[i], {"kind", "at", "worker_id"}, path);
        ev.kind = InjectedEvent::Kind::WorkerFailure;
        const std::int64_t id =
            get_int(require(inj[i], "worker_id", path), path + ".worker_id");
        if (id < 1) throw SchemaError(path + ".worker_id", "out of range");
        ev.worker_id = static_cast<WorkerId>(id);
      } else {
        throw SchemaError(path + ".kind",
                          "expected \"cancel_job\" or \"worker_failure\"");
      }
      wl.injected.push_back(ev);
    }
  }
  return wl;
}

namespace {
std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SchemaError(path.string(), "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

ClusterConfig load_cluster_config(const std::filesystem::path& path) {
  return parse_cluster_config(slurp(path));
}

WorkloadSpec load_workload_spec(const std::filesystem::path& path) {
  return parse_workload_spec(slurp(path));
}

}  // namespace slasim
