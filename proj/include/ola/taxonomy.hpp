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
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ola/evaluation.hpp"
#include "ola/language.hpp"
#include "ola/lid.hpp"
#include "ola/script.hpp"

namespace ola {

enum class FailurePattern {
  Correct,
  CorrectWithDeviations,
  WrongStartRecovered,
  WrongFromStart,
  WrongFromMiddle,
};
inline constexpr std::size_t kFailurePatternCount = 5;

std::string_view to_string(FailurePattern p) noexcept;
FailurePattern parse_failure_pattern(std::string_view s);

/// Pattern over the voting sentences. Throws UndeterminedVerdict.
FailurePattern classify_pattern(const ResponseLangVerdict& verdict, const Language& expected);

struct SentenceHit {
  std::size_t segment_index = 0;
  Language language = kEnglish;

  friend bool operator==(const SentenceHit&, const SentenceHit&) = default;
};

struct CharHit {
  std::size_t start = 0;  ///< code point offsets, end exclusive
  std::size_t end = 0;
  ScriptClass script = ScriptClass::OtherLetter;
  Language mapped = kEnglish;
  std::string text;
  std::string snippet;

  friend bool operator==(const CharHit&, const CharHit&) = default;
};

struct IntrusionReport {
  std::vector<SentenceHit> sentence_hits;
  std::vector<CharHit> char_hits;
  std::set<Language> exclusion_set;

  bool empty() const noexcept { return sentence_hits.empty() && char_hits.empty(); }
};

/// Default exclusions for the Korean-English benchmark.
std::set<Language> default_exclusions();

/// Third-language sentences among the voting segments and letter runs in
/// scripts that map to a language outside expected ∪ prompt_langs ∪
/// exclusions. Han runs are never reported.
IntrusionReport detect_intrusions(std::string_view response_text, const Language& expected,
                                  const std::set<Language>& prompt_langs,
                                  const std::set<Language>& exclusions,
                                  const LidBackend& backend, std::string_view response_id = {});

struct IntrusionRow {
  Rate incorrect;  ///< responses with at least one character-level hit
  /// Per offending language, the number of responses containing it.
  std::vector<std::pair<Language, std::size_t>> ranking;

  Rate correct() const { return {incorrect.n - incorrect.passes, incorrect.n}; }
  std::size_t errors() const { return incorrect.passes; }
  /// "RU (55), JA (23)"
  std::string ranking_str(std::size_t top = 0) const;
};

std::map<std::string, IntrusionRow> intrusion_summary(
    const std::vector<std::pair<std::string, IntrusionReport>>& grouped_reports);

struct PatternDistribution {
  std::array<std::size_t, kFailurePatternCount> counts{};
  std::size_t n = 0;

  Rate share(FailurePattern p) const {
    return {counts[static_cast<std::size_t>(p)], n};
  }
};

std::map<std::string, PatternDistribution> pattern_distribution(
    const std::vector<std::pair<std::string, FailurePattern>>& grouped_patterns);

}  // namespace ola
