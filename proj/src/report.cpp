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

#include "ola/report.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ola/errors.hpp"
#include "ola/jsonl.hpp"

namespace ola {
namespace {

Json rate_json(const Rate& r) { return {{"passes", r.passes}, {"n", r.n}}; }
Rate rate_from(const Json& j) { return {j.at("passes").get<std::uint64_t>(), j.at("n").get<std::uint64_t>()}; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + csv_field(cols[i]);
  return out + "\n";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cur;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') cur += text[++i];
      else if (c == '"') quoted = false;
      else cur += c;
      continue;
    }
    if (c == '"') { quoted = true; any = true; }
    else if (c == ',') { row.push_back(std::move(cur)); cur.clear(); any = true; }
    else if (c == '\n') {
      row.push_back(std::move(cur));
      cur.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') { cur += c; any = true; }
  }
  if (any) {
    row.push_back(std::move(cur));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string p_text(double p) { return p < 0.001 ? "< 0.001" : fmt::format("{:.4f}", p); }

std::string lang_upper(const Language& l) {
  std::string s = l.code();
  for (auto& c : s) c = static_cast<char>(c - 32);
  return s;
}

}  // namespace

Json to_json(const ReportBundle& b) {
  Json j;
  j["pass_rates"] = Json::array();
  for (const auto& r : b.pass_rates)
    j["pass_rates"].push_back({{"setting", r.setting}, {"config", r.config}, {"model", r.model},
                               {"condition", r.condition}, {"rate", rate_json(r.rate)},
                               {"members", r.members}});
  j["patterns"] = Json::array();
  for (const auto& r : b.patterns) j["patterns"].push_back({{"group", r.group}, {"counts", r.dist.counts}, {"n", r.dist.n}});
  j["intrusions"] = Json::array();
  for (const auto& r : b.intrusions) {
    Json ranking = Json::array();
    for (const auto& [l, c] : r.row.ranking) ranking.push_back({l.code(), c});
    j["intrusions"].push_back({{"group", r.group}, {"incorrect", rate_json(r.row.incorrect)}, {"ranking", ranking}});
  }
  j["script_ratio"] = Json::array();
  for (const auto& r : b.script_ratio) {
    Json bins = Json::array();
    for (const auto& bin : r.series.bins) {
      Json counts = Json::object();
      for (const auto& [l, c] : bin.counts) counts[l.code()] = c;
      bins.push_back({{"lo", bin.lo}, {"hi", bin.hi}, {"n", bin.n}, {"counts", counts}});
    }
    j["script_ratio"].push_back({{"group", r.group}, {"script", script_name(r.series.script)},
                                 {"bin_edges", r.series.bin_edges}, {"bins", bins},
                                 {"dropped_undetermined", r.series.dropped_undetermined}});
  }
  j["boundary"] = Json::array();
  for (const auto& r : b.boundary) {
    const auto& e = r.effect;
    Json test = nullptr;
    if (e.test) test = {{"statistic", e.test->statistic}, {"p", e.test->p}};
    j["boundary"].push_back({{"group", r.group},
                             {"position", e.position == BoundaryPosition::First ? "First" : "Last"},
                             {"languages", {e.languages.first.code(), e.languages.second.code()}},
                             {"table", {e.table.a, e.table.b, e.table.c, e.table.d}},
                             {"test", test},
                             {"dropped_undetermined", e.dropped_undetermined},
                             {"excluded_other", e.excluded_other}});
  }
  j["position"] = Json::array();
  for (const auto& r : b.position)
    j["position"].push_back({{"group", r.group}, {"counts", r.quadrants.counts}, {"n", r.quadrants.n}});
  j["cot"] = Json::array();
  for (const auto& r : b.cot) j["cot"].push_back({{"group", r.group}, {"rate", rate_json(r.rate)}});
  j["manifest"] = b.manifest;
  return j;
}

ReportBundle bundle_from_json(const Json& j) {
  try {
    ReportBundle b;
    for (const auto& r : j.at("pass_rates"))
      b.pass_rates.push_back({r.at("setting"), r.at("config"), r.at("model"), r.at("condition"),
                              rate_from(r.at("rate")), r.at("members").get<std::vector<std::string>>()});
    for (const auto& r : j.at("patterns")) {
      PatternRow row{r.at("group"), {}};
      row.dist.counts = r.at("counts").get<std::array<std::size_t, kFailurePatternCount>>();
      row.dist.n = r.at("n");
      b.patterns.push_back(std::move(row));
    }
    for (const auto& r : j.at("intrusions")) {
      IntrusionSummaryRow row{r.at("group"), {}};
      row.row.incorrect = rate_from(r.at("incorrect"));
      for (const auto& e : r.at("ranking"))
        row.row.ranking.emplace_back(Language(e.at(0).get<std::string>()), e.at(1).get<std::size_t>());
      b.intrusions.push_back(std::move(row));
    }
    for (const auto& r : j.at("script_ratio")) {
      ScriptRatioRow row{r.at("group"), {}};
      const auto cls = parse_script_class(r.at("script").get<std::string>());
      if (!cls) throw FormatError("unknown script in bundle");
      row.series.script = *cls;
      row.series.bin_edges = r.at("bin_edges").get<std::vector<double>>();
      row.series.dropped_undetermined = r.at("dropped_undetermined");
      for (const auto& bin : r.at("bins")) {
        RateBin rb{bin.at("lo"), bin.at("hi"), bin.at("n"), {}};
        for (const auto& [k, v] : bin.at("counts").items()) rb.counts[Language(k)] = v.get<std::size_t>();
        row.series.bins.push_back(std::move(rb));
      }
      b.script_ratio.push_back(std::move(row));
    }
    for (const auto& r : j.at("boundary")) {
      BoundaryRow row{r.at("group"), {}};
      auto& e = row.effect;
      e.position = r.at("position") == "First" ? BoundaryPosition::First : BoundaryPosition::Last;
      e.languages = {Language(r.at("languages").at(0).get<std::string>()),
                     Language(r.at("languages").at(1).get<std::string>())};
      const auto& t = r.at("table");
      e.table = {t.at(0), t.at(1), t.at(2), t.at(3)};
      if (!r.at("test").is_null()) e.test = ChiSquare{r["test"].at("statistic"), r["test"].at("p")};
      e.dropped_undetermined = r.at("dropped_undetermined");
      e.excluded_other = r.at("excluded_other");
      b.boundary.push_back(std::move(row));
    }
    for (const auto& r : j.at("position")) {
      PositionRow row{r.at("group"), {}};
      row.quadrants.counts = r.at("counts").get<std::array<std::size_t, 4>>();
      row.quadrants.n = r.at("n");
      b.position.push_back(std::move(row));
    }
    for (const auto& r : j.at("cot")) b.cot.push_back({r.at("group"), rate_from(r.at("rate"))});
    b.manifest = j.value("manifest", Json::object());
    return b;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("report bundle: ") + e.what());
  }
}

std::string diff_cell(const Rate& before, const Rate& after) {
  const auto d = after.hundredths() - before.hundredths();
  return before.str() + " → " + after.str() + " (" + (d >= 0 ? "+" : "") + format_hundredths(d) + ")";
}

std::vector<std::string> emit_report(const ReportBundle& b, const std::string& out_dir,
                                     const std::set<std::string>& sections) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto want = [&](const char* s) { return sections.contains(s); };
  auto write_csv = [&](const std::string& name, const std::string& body) {
    const auto path = (fs::path(out_dir) / name).string();
    write_file(path, body);
    written.push_back(path);
  };
  std::ostringstream md;
  md << "# Output-language alignment report\n";
  auto notice = [&](const char* title) { md << "\n## " << title << "\n\n_No data for this section._\n"; };

  if (want("pass_rates")) {
    if (b.pass_rates.empty()) notice("Pass rates");
    else {
      md << "\n## Pass rates\n\n| Setting | Configuration | Model | Condition | Pass rate (%) | n |\n"
            "|---|---|---|---|---:|---:|\n";
      std::string csv = csv_row({"setting", "config", "model", "condition", "passes", "n", "pass_rate"});
      for (const auto& r : b.pass_rates) {
        md << "| " << r.setting << " | " << r.config << " | " << r.model << " | " << r.condition
           << " | " << r.rate.str() << " | " << r.rate.n << " |\n";
        csv += csv_row({r.setting, r.config, r.model, r.condition, std::to_string(r.rate.passes),
                        std::to_string(r.rate.n), r.rate.str()});
      }
      write_csv("pass_rates.csv", csv);
    }
  }

  if (want("diff")) {
    std::map<std::string, const PassRateRow*> baseline;
    for (const auto& r : b.pass_rates)
      if (r.condition == "Baseline") baseline[r.setting + "|" + r.config + "|" + r.model] = &r;
    std::string rows, csv = csv_row({"setting", "config", "model", "condition", "baseline", "value", "delta"});
    for (const auto& r : b.pass_rates) {
      if (r.condition == "Baseline") continue;
      const auto it = baseline.find(r.setting + "|" + r.config + "|" + r.model);
      if (it == baseline.end()) continue;
      rows += "| " + r.setting + " | " + r.config + " | " + r.model + " | " + r.condition + " | " +
              diff_cell(it->second->rate, r.rate) + " |\n";
      const auto d = r.rate.hundredths() - it->second->rate.hundredths();
      csv += csv_row({r.setting, r.config, r.model, r.condition, it->second->rate.str(), r.rate.str(),
                      (d >= 0 ? "+" : "") + format_hundredths(d)});
    }
    if (rows.empty()) notice("Change against Baseline");
    else {
      md << "\n## Change against Baseline\n\n| Setting | Configuration | Model | Condition | Pass rate (%) |\n"
            "|---|---|---|---|---|\n"
         << rows;
      write_csv("pass_rate_diff.csv", csv);
    }
  }

  if (want("patterns")) {
    if (b.patterns.empty()) notice("Response patterns");
    else {
      md << "\n## Response patterns (%)\n\n| Group |";
      std::vector<std::string> header{"group"};
      for (std::size_t p = 0; p < kFailurePatternCount; ++p) {
        md << ' ' << to_string(static_cast<FailurePattern>(p)) << " |";
        header.emplace_back(to_string(static_cast<FailurePattern>(p)));
      }
      header.emplace_back("n");
      md << " n |\n|---|";
      for (std::size_t p = 0; p < kFailurePatternCount; ++p) md << "---:|";
      md << "---:|\n";
      std::string csv = csv_row(header);
      for (const auto& r : b.patterns) {
        md << "| " << r.group << " |";
        std::vector<std::string> cols{r.group};
        for (std::size_t p = 0; p < kFailurePatternCount; ++p) {
          md << ' ' << r.dist.share(static_cast<FailurePattern>(p)).str() << " |";
          cols.push_back(std::to_string(r.dist.counts[p]));
        }
        cols.push_back(std::to_string(r.dist.n));
        md << ' ' << r.dist.n << " |\n";
        csv += csv_row(cols);
      }
      write_csv("patterns.csv", csv);
    }
  }

  if (want("intrusions")) {
    if (b.intrusions.empty()) notice("Character-level intrusions");
    else {
      md << "\n## Character-level intrusions\n\n| Group | Correct (%) | Incorrect (%) | #Errors | "
            "Most common offending languages |\n|---|---:|---:|---:|---|\n";
      std::string csv = csv_row({"group", "responses", "errors", "correct_pct", "incorrect_pct", "ranking"});
      for (const auto& r : b.intrusions) {
        md << "| " << r.group << " | " << r.row.correct().str() << " | " << r.row.incorrect.str() << " | "
           << r.row.errors() << " | " << r.row.ranking_str(4) << " |\n";
        csv += csv_row({r.group, std::to_string(r.row.incorrect.n), std::to_string(r.row.errors()),
                        r.row.correct().str(), r.row.incorrect.str(), r.row.ranking_str()});
      }
      write_csv("intrusions.csv", csv);
    }
  }

  if (want("script_ratio")) {
    if (b.script_ratio.empty()) notice("Script ratio");
    else {
      md << "\n## Script ratio\n\n| Group | Script | Bin | n | Output shares |\n|---|---|---|---:|---|\n";
      std::string csv = csv_row({"group", "script", "bin_center", "lang", "rate", "n"});
      for (const auto& r : b.script_ratio) {
        for (const auto& bin : r.series.bins) {
          const double center = (bin.lo + bin.hi) / 2;
          std::string shares;
          for (const auto& [l, c] : bin.counts) {
            shares += (shares.empty() ? "" : ", ") + lang_upper(l) + " " + Rate{c, bin.n}.str();
            csv += csv_row({r.group, std::string(script_name(r.series.script)), fmt::format("{:.3f}", center),
                            l.code(), fmt::format("{:.6f}", bin.rate(l)), std::to_string(bin.n)});
          }
          if (bin.n == 0) continue;
          md << "| " << r.group << " | " << script_name(r.series.script) << " | "
             << fmt::format("{:.2f}–{:.2f}", bin.lo, bin.hi) << " | " << bin.n << " | " << shares << " |\n";
        }
      }
      write_csv("script_ratio.csv", csv);
    }
  }

  if (want("boundary")) {
    if (b.boundary.empty()) notice("Boundary word");
    else {
      md << "\n## Boundary word\n\nRows: language of the boundary word. Columns: response language.\n\n"
            "| Group | Word | Table | chi2 | p | Dropped |\n|---|---|---|---:|---|---:|\n";
      std::string csv = csv_row({"group", "position", "row_lang", "col_lang", "a", "b", "c", "d", "chi2", "p",
                                 "dropped_undetermined", "excluded_other"});
      for (const auto& r : b.boundary) {
        const auto& e = r.effect;
        const auto pos = e.position == BoundaryPosition::First ? "First" : "Last";
        const auto l1 = lang_upper(e.languages.first), l2 = lang_upper(e.languages.second);
        md << "| " << r.group << " | " << pos << " | " << l1 << "→" << l1 << ' ' << e.table.a << ", " << l1
           << "→" << l2 << ' ' << e.table.b << ", " << l2 << "→" << l1 << ' ' << e.table.c << ", " << l2
           << "→" << l2 << ' ' << e.table.d << " | "
           << (e.test ? fmt::format("{:.3f}", e.test->statistic) : "n/a") << " | "
           << (e.test ? p_text(e.test->p) : "degenerate table") << " | "
           << e.dropped_undetermined + e.excluded_other << " |\n";
        csv += csv_row({r.group, pos, e.languages.first.code(), e.languages.second.code(),
                        std::to_string(e.table.a), std::to_string(e.table.b), std::to_string(e.table.c),
                        std::to_string(e.table.d), e.test ? fmt::format("{:.6f}", e.test->statistic) : "",
                        e.test ? fmt::format("{:.6g}", e.test->p) : "", std::to_string(e.dropped_undetermined),
                        std::to_string(e.excluded_other)});
      }
      write_csv("boundary.csv", csv);
    }
  }

  if (want("position")) {
    if (b.position.empty()) notice("Instruction position");
    else {
      md << "\n## Instruction position (InstrFirst / ContentFirst, %)\n\n"
            "| Group | ✓✓ | ✓✗ | ✗✓ | ✗✗ | Pairs |\n|---|---:|---:|---:|---:|---:|\n";
      std::string csv = csv_row({"group", "pass_pass", "pass_fail", "fail_pass", "fail_fail", "pairs"});
      for (const auto& r : b.position) {
        const auto& q = r.quadrants;
        md << "| " << r.group << " | " << q.rate(0).str() << " | " << q.rate(1).str() << " | " << q.rate(2).str()
           << " | " << q.rate(3).str() << " | " << q.n << " |\n";
        csv += csv_row({r.group, std::to_string(q.counts[0]), std::to_string(q.counts[1]),
                        std::to_string(q.counts[2]), std::to_string(q.counts[3]), std::to_string(q.n)});
      }
      write_csv("position.csv", csv);
    }
  }

  if (want("cot")) {
    if (b.cot.empty()) notice("CoT decision consistency");
    else {
      md << "\n## CoT decision consistency\n\n| Group | Consistency (%) | n |\n|---|---:|---:|\n";
      std::string csv = csv_row({"group", "consistent", "n", "pct"});
      for (const auto& r : b.cot) {
        md << "| " << r.group << " | " << r.rate.str() << " | " << r.rate.n << " |\n";
        csv += csv_row({r.group, std::to_string(r.rate.passes), std::to_string(r.rate.n), r.rate.str()});
      }
      write_csv("cot.csv", csv);
    }
  }

  if (!b.manifest.empty()) md << "\n## Manifest\n\n```json\n" << b.manifest.dump(2) << "\n```\n";
  const auto md_path = (fs::path(out_dir) / "report.md").string();
  write_file(md_path, md.str());
  written.insert(written.begin(), md_path);
  return written;
}

std::vector<PassRateRow> read_pass_rate_csv(const std::string& path) {
  const auto rows = parse_csv(read_file(path));
  if (rows.empty() || rows[0].size() != 7 || rows[0][0] != "setting")
    throw FormatError(path + ": not a pass-rate table");
  std::vector<PassRateRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 7) throw FormatError(path + ": row " + std::to_string(i + 1) + " has " + std::to_string(r.size()) + " columns");
    PassRateRow row{r[0], r[1], r[2], r[3], {std::stoull(r[4]), std::stoull(r[5])}, {}};
    if (row.rate.str() != r[6]) throw FormatError(path + ": percentage does not match counts on row " + std::to_string(i + 1));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace ola
