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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ola/evaluation.hpp"
#include "ola/records.hpp"
#include "ola/script.hpp"
#include "ola/stats.hpp"

namespace ola {

struct ScoredItem {
  PromptRecord prompt;
  EvalResult result;
};

struct RateBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  std::map<Language, std::size_t> counts;  ///< by primary output language

  double rate(const Language& l) const;
};

struct BinnedRateSeries {
  ScriptClass script = ScriptClass::Latin;
  std::vector<double> bin_edges;  ///< bins + 1 values from 0 to 1
  std::vector<RateBin> bins;
  std::size_t dropped_undetermined = 0;
};

/// Output-language shares by the prompt's ratio of `script` letters. The
/// last bin is closed. Throws EmptyInput, ValidationError when bins < 2.
BinnedRateSeries script_ratio_effect(const std::vector<ScoredItem>& items, ScriptClass script,
                                     int bins = 10);

struct BoundaryEffect {
  BoundaryPosition position = BoundaryPosition::Last;
  std::pair<Language, Language> languages{kEnglish, kKorean};
  ContingencyTable2x2 table;  ///< rows: boundary language, cols: output language
  std::optional<ChiSquare> test;  ///< empty when the table is degenerate
  std::size_t dropped_undetermined = 0;
  std::size_t excluded_other = 0;
};

/// Cross-tabulates the language of the prompt's first or last word against
/// the response language. Throws EmptyInput when no item qualifies.
BoundaryEffect boundary_word_effect(const std::vector<ScoredItem>& items, BoundaryPosition position,
                                    std::pair<Language, Language> languages = {kEnglish, kKorean},
                                    const LatinResolver& resolve_latin = {});

struct PositionPair {
  std::string group;
  std::string template_id;
  bool instr_first_pass = false;
  bool content_first_pass = false;
};

/// Matches InstrFirst and ContentFirst results of the same template,
/// content, model, condition and sample. Throws UnpairedItem.
std::vector<PositionPair> pair_by_position(const std::vector<ScoredItem>& items);

struct QuadrantShares {
  /// pass/pass, pass/fail, fail/pass, fail/fail (InstrFirst/ContentFirst)
  std::array<std::size_t, 4> counts{};
  std::size_t n = 0;

  double share(std::size_t q) const { return n ? double(counts[q]) / double(n) : 0.0; }
  Rate rate(std::size_t q) const { return {counts[q], n}; }
};

std::map<std::string, QuadrantShares> position_robustness(const std::vector<PositionPair>& pairs);

}  // namespace ola
