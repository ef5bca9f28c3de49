// Copyright 2026 The gapdecomp authors
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

#include "gapdecomp/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "gapdecomp/errors.hpp"
#include "gapdecomp/version.hpp"

namespace gapdecomp {

RunRecord make_run_record(const std::string& command,
                          nlohmann::ordered_json config,
                          std::uint64_t master_seed) {
  RunRecord record;
  record.command = command;
  record.config = std::move(config);
  record.master_seed = master_seed;
  record.tool_version = kToolVersion;
  record.timestamp_utc = utc_now_iso8601();
  return record;
}

nlohmann::ordered_json to_payload(const RunRecord& record) {
  nlohmann::ordered_json payload;
  payload["command"] = record.command;
  payload["tool_version"] = record.tool_version;
  payload["master_seed"] = record.master_seed;
  payload["config"] = record.config;
  payload["results"] = record.results;
  return payload;
}

void write_payload(const nlohmann::ordered_json& payload,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.good()) {
    throw ContractError("cannot write payload file '" + path.string() + "'");
  }
  out << payload.dump(2) << '\n';
  if (!out.good()) {
    throw ContractError("write failed for payload file '" + path.string() +
                        "'");
  }
}

std::string utc_now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_percent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", fraction * 100.0);
  std::string s = buf;
  if (s == "-0.0") s = "0.0";
  return s;
}

std::string format_percent_pm(double mean_fraction, double std_fraction) {
  return format_percent(mean_fraction) + " ± " + format_percent(std_fraction);
}

nlohmann::ordered_json trial_to_json(const GapDecomposition& gaps) {
  nlohmann::ordered_json j;
  j["eer_in_in"] = gaps.eer_in_in;
  j["eer_outdom_outdom"] = gaps.eer_outdom_outdom;
  j["eer_in_out"] = gaps.eer_in_out;
  j["performance_gap"] = gaps.performance_gap;
  j["hardness_gap"] = gaps.hardness_gap;
  j["difference_gap"] = gaps.difference_gap;
  return j;
}

nlohmann::ordered_json aggregate_to_json(const TrialAggregate& agg) {
  nlohmann::ordered_json j;
  j["mean"] = agg.mean;
  j["std"] = agg.std_dev;
  j["n_trials"] = agg.n_trials;
  j["degenerate"] = agg.degenerate;
  return j;
}

nlohmann::ordered_json aggregates_to_json(const GapAggregates& agg) {
  nlohmann::ordered_json j;
  j["eer_in_in"] = aggregate_to_json(agg.eer_in_in);
  j["eer_outdom_outdom"] = aggregate_to_json(agg.eer_outdom_outdom);
  j["eer_in_out"] = aggregate_to_json(agg.eer_in_out);
  j["performance_gap"] = aggregate_to_json(agg.performance_gap);
  j["hardness_gap"] = aggregate_to_json(agg.hardness_gap);
  j["difference_gap"] = aggregate_to_json(agg.difference_gap);
  return j;
}

std::string render_gap_table(const std::vector<GapTableRow>& rows) {
  std::string out;
  out += "| Model/Run | Performance Gap | Hardness Gap | Difference Gap |\n";
  out += "|---|---|---|---|\n";
  for (const GapTableRow& row : rows) {
    out += "| " + row.label + " | " + row.performance + " | " + row.hardness +
           " | " + row.difference + " |\n";
  }
  return out;
}

}  // namespace gapdecomp
