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

#include "slasim/trace.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "slasim/accounting.hpp"
#include "slasim/errors.hpp"

namespace slasim {

namespace {

constexpr const char* kHeader = "time,kind,job,task,worker,detail";

std::string cell(std::int64_t v) { return v < 0 ? "" : std::to_string(v); }

std::int64_t parse_cell(const std::string& s, const std::string& where) {
  if (s.empty()) return -1;
  try {
    return std::stoll(s);
  } catch (const std::exception&) {
    throw SimFault("events.csv: bad number \"" + s + "\" in " + where);
  }
}

// Pulls "key=<int>" out of a detail string.
std::optional<std::int64_t> detail_int(const std::string& detail,
                                       const std::string& key) {
  const std::string needle = key + "=";
  const auto pos = detail.find(needle);
  if (pos == std::string::npos) return std::nullopt;
  std::int64_t v = 0;
  bool any = false;
  for (std::size_t i = pos + needle.size();
       i < detail.size() && detail[i] >= '0' && detail[i] <= '9'; ++i) {
    v = v * 10 + (detail[i] - '0');
    any = true;
  }
  if (!any) return std::nullopt;
  return v;
}

}  // namespace

std::string to_csv_line(const TraceRow& row) {
  std::string detail = row.detail;
  for (char& c : detail) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return std::to_string(row.time) + "," + row.kind + "," + cell(row.job) + "," +
         cell(row.task) + "," + cell(row.worker) + "," + detail;
}

void write_events_csv(const std::filesystem::path& path,
                      const std::vector<TraceRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimFault("cannot write " + path.string());
  out << kHeader << "\n";
  for (const auto& r : rows) out << to_csv_line(r) << "\n";
}

std::vector<TraceRow> read_events_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimFault("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw SimFault(path.string() + ": missing events.csv header");
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::string current;
    for (char c : line) {
      if (c == ',' && cols.size() < 5) {
        cols.push_back(current);
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    cols.push_back(current);
    if (cols.size() != 6) {
      throw SimFault(path.string() + ": expected 6 columns, got " +
                     std::to_string(cols.size()));
    }
    TraceRow row;
    row.time = parse_cell(cols[0], "time");
    row.kind = cols[1];
    row.job = static_cast<JobId>(parse_cell(cols[2], "job"));
    row.task = static_cast<TaskId>(parse_cell(cols[3], "task"));
    row.worker = static_cast<WorkerId>(parse_cell(cols[4], "worker"));
    row.detail = cols[5];
    rows.push_back(std::move(row));
  }
  return rows;
}

ReplayTotals replay_totals(const std::vector<TraceRow>& rows,
                           const ClusterConfig& config) {
  struct LeaseState {
    PoolId pool_id = 0;
    SimTime lease_start = 0;
    // Binding timeline: instants at which the serving job changed.
    std::vector<std::pair<SimTime, std::optional<JobId>>> serving;
  };
  auto pool_of = [&](PoolId id) -> const PoolConfig& {
    for (const auto& p : config.pools) {
      if (p.pool_id == id) return p;
    }
    throw SimFault("trace names unknown pool " + std::to_string(id));
  };

  ReplayTotals out;
  std::map<WorkerId, LeaseState> open;
  for (const auto& row : rows) {
    out.drained_at = std::max(out.drained_at, row.time);
    if (row.kind == "acquire") {
      const auto pool = detail_int(row.detail, "pool");
      if (!pool) throw SimFault("acquire row without pool detail");
      LeaseState ls;
      ls.pool_id = static_cast<PoolId>(*pool);
      ls.lease_start = row.time;
      ls.serving.emplace_back(row.time,
                              row.job >= 0 ? std::optional<JobId>(row.job)
                                           : std::nullopt);
      open[row.worker] = std::move(ls);
      out.dynamic_workers_acquired += 1;
    } else if (row.kind == "rebind") {
      open.at(row.worker).serving.emplace_back(row.time, row.job);
    } else if (row.kind == "unbind" || row.kind == "release" ||
               row.kind == "worker_failure") {
      auto it = open.find(row.worker);
      if (it != open.end()) {
        it->second.serving.emplace_back(row.time, std::nullopt);
      }
    } else if (row.kind == "decommission") {
      auto it = open.find(row.worker);
      if (it == open.end()) {
        throw SimFault("decommission of worker " + std::to_string(row.worker) +
                       " without an acquire");
      }
      const LeaseState& ls = it->second;
      const PoolConfig& pool = pool_of(ls.pool_id);
      const SimTime span = row.time - ls.lease_start;
      if (span < 0 || span % pool.billing_period != 0) {
        throw SimFault("worker " + std::to_string(row.worker) +
                       " lease does not end on a billing boundary");
      }
      const std::int64_t periods = span / pool.billing_period;
      for (std::int64_t k = 0; k < periods; ++k) {
        const SimTime start = ls.lease_start + k * pool.billing_period;
        const Money price = period_price(pool.price_per_period, start,
                                         config.price_schedule);
        out.extra_cost += price;
        std::optional<JobId> owner;
        for (const auto& [at, job] : ls.serving) {
          if (at <= start) owner = job;
        }
        if (!owner) out.shared_cost += price;
      }
      open.erase(it);
    } else if (row.kind == "job_finished") {
      out.makespan = std::max(out.makespan, row.time);
    }
  }
  if (!open.empty()) {
    throw SimFault("trace ends with " + std::to_string(open.size()) +
                   " dynamic workers still leased");
  }
  const PoolConfig& def = pool_of(config.default_pool);
  const std::int64_t static_periods =
      (out.drained_at + def.billing_period - 1) / def.billing_period;
  for (std::int64_t k = 0; k < static_periods; ++k) {
    out.static_cost += config.static_workers *
                       period_price(def.price_per_period,
                                    k * def.billing_period,
                                    config.price_schedule);
  }
  return out;
}

}  // namespace slasim
