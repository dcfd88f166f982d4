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

#include "ola/cues.hpp"

#include <cmath>
#include <tuple>

#include "ola/errors.hpp"

namespace ola {

double RateBin::rate(const Language& l) const {
  const auto it = counts.find(l);
  return n == 0 || it == counts.end() ? 0.0 : double(it->second) / double(n);
}

BinnedRateSeries script_ratio_effect(const std::vector<ScoredItem>& items, ScriptClass script,
                                     int bins) {
  if (bins < 2) throw ValidationError("script_ratio_effect needs at least 2 bins");
  if (items.empty()) throw EmptyInput("no items for script ratio analysis");
  BinnedRateSeries s;
  s.script = script;
  for (int i = 0; i <= bins; ++i) s.bin_edges.push_back(double(i) / bins);
  for (int i = 0; i < bins; ++i) s.bins.push_back({s.bin_edges[i], s.bin_edges[i + 1], 0, {}});
  for (const auto& it : items) {
    if (!it.result.verdict.primary) {
      ++s.dropped_undetermined;
      continue;
    }
    const double x = script_profile(it.prompt.text).ratio(script);
    const int b = std::min(bins - 1, static_cast<int>(std::floor(x * bins)));
    auto& bin = s.bins[b];
    ++bin.n;
    ++bin.counts[*it.result.verdict.primary];
  }
  return s;
}

BoundaryEffect boundary_word_effect(const std::vector<ScoredItem>& items, BoundaryPosition position,
                                    std::pair<Language, Language> languages,
                                    const LatinResolver& resolve_latin) {
  BoundaryEffect e;
  e.position = position;
  e.languages = languages;
  auto index = [&](const Language& l) -> int {
    if (l == languages.first) return 0;
    if (l == languages.second) return 1;
    return -1;
  };
  std::size_t used = 0;
  for (const auto& it : items) {
    const auto cue = boundary_token_language(it.prompt.text, position, resolve_latin);
    const auto& out = it.result.verdict.primary;
    if (!cue || !out) {
      ++e.dropped_undetermined;
      continue;
    }
    const int r = index(*cue);
    const int c = index(*out);
    if (r < 0 || c < 0) {
      ++e.excluded_other;
      continue;
    }
    ++used;
    std::uint64_t* cells[2][2] = {{&e.table.a, &e.table.b}, {&e.table.c, &e.table.d}};
    ++*cells[r][c];
  }
  if (used == 0) throw EmptyInput("no item with a determined boundary language and verdict");
  if (!e.table.degenerate()) e.test = chi_square_2x2(e.table);
  return e;
}

std::vector<PositionPair> pair_by_position(const std::vector<ScoredItem>& items) {
  using Key = std::tuple<std::string, std::size_t, std::string, Condition, std::size_t>;
  struct Slot {
    std::string group;
    std::optional<bool> instr_first;
    std::optional<bool> content_first;
    std::string example_id;
  };
  std::map<Key, Slot> slots;
  for (const auto& it : items) {
    const auto& p = it.prompt;
    if (p.setting != Setting::Complex) continue;
    if (!p.template_id || !p.position)
      throw ValidationError("complex prompt " + p.id + " lacks template_id or position");
    Key key{*p.template_id, p.content_index.value_or(0), it.result.model_id, it.result.condition,
            it.result.sample_index};
    auto& slot = slots[key];
    slot.group = p.config_label() + " | " + it.result.model_id + " | " +
                 std::string(to_string(it.result.condition));
    slot.example_id = p.id;
    (*p.position == Position::InstrFirst ? slot.instr_first : slot.content_first) = it.result.pass;
  }
  std::vector<PositionPair> out;
  for (const auto& [key, slot] : slots) {
    if (!slot.instr_first || !slot.content_first)
      throw UnpairedItem("template " + std::get<0>(key) + " (prompt " + slot.example_id +
                         ") is missing its " + (slot.instr_first ? "ContentFirst" : "InstrFirst") +
                         " member");
    out.push_back({slot.group, std::get<0>(key), *slot.instr_first, *slot.content_first});
  }
  return out;
}

std::map<std::string, QuadrantShares> position_robustness(const std::vector<PositionPair>& pairs) {
  std::map<std::string, QuadrantShares> out;
  for (const auto& p : pairs) {
    auto& q = out[p.group];
    const std::size_t idx = (p.instr_first_pass ? 0 : 2) + (p.content_first_pass ? 0 : 1);
    ++q.counts[idx];
    ++q.n;
  }
  return out;
}

}  // namespace ola
