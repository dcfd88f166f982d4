// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "ola/cues.hpp"
#include "ola/evaluation.hpp"
#include "ola/records.hpp"
#include "ola/taxonomy.hpp"

namespace ola {

struct PassRateRow {
  std::string setting;
  std::string config;
  std::string model;
  std::string condition;
  Rate rate;
  std::vector<std::string> members;  ///< contributing response ids

  std::string key() const { return setting + " | " + config + " | " + model + " | " + condition; }
};

struct PatternRow {
  std::string group;
  PatternDistribution dist;
};

struct IntrusionSummaryRow {
  std::string group;
  IntrusionRow row;
};

struct ScriptRatioRow {
  std::string group;
  BinnedRateSeries series;
};

struct BoundaryRow {
  std::string group;
  BoundaryEffect effect;
};

struct PositionRow {
  std::string group;
  QuadrantShares quadrants;
};

struct CotRow {
  std::string group;
  Rate rate;
};

/// Everything a report is rendered from.
struct ReportBundle {
  std::vector<PassRateRow> pass_rates;
  std::vector<PatternRow> patterns;
  std::vector<IntrusionSummaryRow> intrusions;
  std::vector<ScriptRatioRow> script_ratio;
  std::vector<BoundaryRow> boundary;
  std::vector<PositionRow> position;
  std::vector<CotRow> cot;
  Json manifest = Json::object();
};

Json to_json(const ReportBundle& b);
ReportBundle bundle_from_json(const Json& j);

/// "57.36 → 66.28 (+8.92)", using the rounded cell values.
std::string diff_cell(const Rate& before, const Rate& after);

inline const std::set<std::string>& all_report_sections() {
  static const std::set<std::string> kAll{"pass_rates", "diff", "patterns", "intrusions",
                                          "script_ratio", "boundary", "position", "cot"};
  return kAll;
}

/// Writes report.md plus one CSV per non-empty section into `out_dir` and
/// returns the written paths. Requested sections without rows are replaced
/// by a notice line in the markdown.
std::vector<std::string> emit_report(const ReportBundle& bundle, const std::string& out_dir,
                                     const std::set<std::string>& sections = all_report_sections());

/// Rows of pass_rates.csv.
std::vector<PassRateRow> read_pass_rate_csv(const std::string& path);

}  // namespace ola
