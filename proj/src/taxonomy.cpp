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

#include "ola/taxonomy.hpp"

#include <algorithm>

#include "ola/errors.hpp"
#include "ola/segment.hpp"
#include "ola/utf8.hpp"

namespace ola {
namespace {

constexpr std::size_t kSnippetContext = 12;

constexpr std::array<std::string_view, kFailurePatternCount> kPatternNames{
    "Correct", "CorrectWithDeviations", "WrongStartRecovered", "WrongFromStart",
    "WrongFromMiddle"};

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c);
  return s;
}

}  // namespace

std::string_view to_string(FailurePattern p) noexcept {
  return kPatternNames[static_cast<std::size_t>(p)];
}

FailurePattern parse_failure_pattern(std::string_view s) {
  for (std::size_t i = 0; i < kPatternNames.size(); ++i)
    if (kPatternNames[i] == s) return static_cast<FailurePattern>(i);
  throw ValidationError("unknown failure pattern '" + std::string(s) + "'");
}

FailurePattern classify_pattern(const ResponseLangVerdict& verdict, const Language& expected) {
  if (!verdict.determined()) throw UndeterminedVerdict("no voting sentence");
  const auto labels = verdict.voting_labels();
  const bool pass = *verdict.primary == expected;
  const bool first_ok = labels.front() == expected;
  if (pass) {
    if (!first_ok) return FailurePattern::WrongStartRecovered;
    const bool all_ok =
        std::all_of(labels.begin(), labels.end(), [&](const Language& l) { return l == expected; });
    return all_ok ? FailurePattern::Correct : FailurePattern::CorrectWithDeviations;
  }
  return first_ok ? FailurePattern::WrongFromMiddle : FailurePattern::WrongFromStart;
}

std::set<Language> default_exclusions() { return {kEnglish, kKorean, kChinese}; }

IntrusionReport detect_intrusions(std::string_view response_text, const Language& expected,
                                  const std::set<Language>& prompt_langs,
                                  const std::set<Language>& exclusions,
                                  const LidBackend& backend, std::string_view response_id) {
  IntrusionReport rep;
  rep.exclusion_set = exclusions;
  std::set<Language> allowed = exclusions;
  allowed.insert(expected);
  allowed.insert(prompt_langs.begin(), prompt_langs.end());

  const auto segments = segment_sentences(response_text);
  if (!segments.empty()) {
    const auto verdict = vote(label_segments(segments, backend, response_id), backend.config());
    for (const auto& sl : verdict.sentence_labels) {
      if (sl.votes && !allowed.contains(*sl.prediction.label))
        rep.sentence_hits.push_back({sl.index, *sl.prediction.label});
    }
  }

  const std::u32string text = utf8::decode(response_text);
  std::size_t i = 0;
  while (i < text.size()) {
    const ScriptClass cls = classify_char(text[i]);
    const auto lang = script_language(cls);
    if (cls == ScriptClass::Han || !lang || allowed.contains(*lang)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && classify_char(text[j]) == cls) ++j;
    const std::size_t lo = i > kSnippetContext ? i - kSnippetContext : 0;
    const std::size_t hi = std::min(text.size(), j + kSnippetContext);
    const std::u32string_view view(text);
    rep.char_hits.push_back({i, j, cls, *lang, utf8::encode(view.substr(i, j - i)),
                             utf8::encode(view.substr(lo, hi - lo))});
    i = j;
  }
  return rep;
}

std::string IntrusionRow::ranking_str(std::size_t top) const {
  std::string out;
  const std::size_t limit = top == 0 ? ranking.size() : std::min(top, ranking.size());
  for (std::size_t k = 0; k < limit; ++k) {
    if (k) out += ", ";
    out += upper(ranking[k].first.code()) + " (" + std::to_string(ranking[k].second) + ")";
  }
  return out;
}

std::map<std::string, IntrusionRow> intrusion_summary(
    const std::vector<std::pair<std::string, IntrusionReport>>& grouped_reports) {
  std::map<std::string, IntrusionRow> rows;
  std::map<std::string, std::map<Language, std::size_t>> per_lang;
  for (const auto& [group, rep] : grouped_reports) {
    auto& row = rows[group];
    ++row.incorrect.n;
    if (rep.char_hits.empty()) continue;
    ++row.incorrect.passes;
    std::set<Language> langs;
    for (const auto& h : rep.char_hits) langs.insert(h.mapped);
    for (const auto& l : langs) ++per_lang[group][l];
  }
  for (auto& [group, row] : rows) {
    for (const auto& [l, c] : per_lang[group]) row.ranking.emplace_back(l, c);
    std::stable_sort(row.ranking.begin(), row.ranking.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
  }
  return rows;
}

std::map<std::string, PatternDistribution> pattern_distribution(
    const std::vector<std::pair<std::string, FailurePattern>>& grouped_patterns) {
  std::map<std::string, PatternDistribution> out;
  for (const auto& [group, p] : grouped_patterns) {
    auto& d = out[group];
    ++d.counts[static_cast<std::size_t>(p)];
    ++d.n;
  }
  return out;
}

}  // namespace ola
