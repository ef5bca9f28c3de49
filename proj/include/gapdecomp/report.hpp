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

#ifndef GAPDECOMP_REPORT_HPP_
#define GAPDECOMP_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "gapdecomp/decomposition.hpp"

namespace gapdecomp {

// One CLI run: command, effective configuration, master seed, and results.
// The serialized payload holds everything needed to rerun the command and is
// byte-stable across reruns; the timestamp is informational only and is
// deliberately kept out of the payload.
struct RunRecord {
  std::string command;
  nlohmann::ordered_json config;
  std::uint64_t master_seed = 0;
  std::string tool_version;
  std::string timestamp_utc;
  nlohmann::ordered_json results;
};

RunRecord make_run_record(const std::string& command,
                          nlohmann::ordered_json config,
                          std::uint64_t master_seed);

nlohmann::ordered_json to_payload(const RunRecord& record);

void write_payload(const nlohmann::ordered_json& payload,
                   const std::filesystem::path& path);

std::string utc_now_iso8601();

// Fraction -> percent string with one decimal ("12.3"); negative zero is
// normalized to "0.0".
std::string format_percent(double fraction);

// "mean ± std" in percent, matching the gap-table layout.
std::string format_percent_pm(double mean_fraction, double std_fraction);

nlohmann::ordered_json trial_to_json(const GapDecomposition& gaps);
nlohmann::ordered_json aggregate_to_json(const TrialAggregate& agg);
nlohmann::ordered_json aggregates_to_json(const GapAggregates& agg);

// Markdown gap table in the fixed column order
// Model/Run | Performance Gap | Hardness Gap | Difference Gap.
struct GapTableRow {
  std::string label;
  std::string performance;
  std::string hardness;
  std::string difference;
};

std::string render_gap_table(const std::vector<GapTableRow>& rows);

}  // namespace gapdecomp

#endif  // GAPDECOMP_REPORT_HPP_
