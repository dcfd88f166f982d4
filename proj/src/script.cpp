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

#include "ola/script.hpp"

#include <algorithm>
#include <iterator>
#include <utility>
#include <vector>

#include "ola/utf8.hpp"

namespace ola {

namespace {

struct ScriptRange {
  char32_t first;
  char32_t last;
  ScriptClass cls;
};

constexpr ScriptRange kRanges[] = {
#include "script_table.inc"
};

constexpr std::array<std::string_view, kScriptClassCount> kNames = {
    "Latin",   "Hangul", "Han",    "Kana",  "Cyrillic",   "Devanagari", "Arabic",
    "Thai",    "Hebrew", "Digit",  "Punctuation", "Whitespace", "OtherLetter", "OtherSymbol"};

}  // namespace

ScriptClass classify_char(char32_t ch) noexcept {
  const auto* end = std::end(kRanges);
  const auto* it = std::upper_bound(std::begin(kRanges), end, ch,
                                    [](char32_t c, const ScriptRange& r) { return c < r.first; });
  if (it == std::begin(kRanges)) return ScriptClass::OtherSymbol;
  --it;
  return ch <= it->last ? it->cls : ScriptClass::OtherSymbol;
}

std::string_view script_name(ScriptClass c) noexcept {
  return kNames[static_cast<std::size_t>(c)];
}

std::optional<ScriptClass> parse_script_class(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<ScriptClass>(i);
  }
  return std::nullopt;
}

double ScriptProfile::ratio(ScriptClass c) const noexcept {
  const auto it = ratios.find(c);
  return it == ratios.end() ? 0.0 : it->second;
}

std::optional<ScriptClass> ScriptProfile::dominant_letter_class() const noexcept {
  std::optional<ScriptClass> best;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < kScriptClassCount; ++i) {
    const auto c = static_cast<ScriptClass>(i);
    if (is_letter(c) && counts[i] > best_count) {
      best = c;
      best_count = counts[i];
    }
  }
  return best;
}

ScriptProfile profile_from_counts(const std::array<std::size_t, kScriptClassCount>& counts) {
  ScriptProfile p;
  p.counts = counts;
  for (std::size_t i = 0; i < kScriptClassCount; ++i) {
    if (is_letter(static_cast<ScriptClass>(i))) p.letter_total += counts[i];
  }
  if (p.letter_total > 0) {
    for (std::size_t i = 0; i < kScriptClassCount; ++i) {
      const auto c = static_cast<ScriptClass>(i);
      if (is_letter(c) && counts[i] > 0) {
        p.ratios[c] = static_cast<double>(counts[i]) / static_cast<double>(p.letter_total);
      }
    }
  }
  return p;
}

ScriptProfile script_profile(std::u32string_view text) {
  std::array<std::size_t, kScriptClassCount> counts{};
  for (char32_t ch : text) ++counts[static_cast<std::size_t>(classify_char(ch))];
  return profile_from_counts(counts);
}

ScriptProfile script_profile(std::string_view text) {
  return script_profile(std::u32string_view(utf8::decode(text)));
}

std::optional<Language> script_language(ScriptClass c) noexcept {
  switch (c) {
    case ScriptClass::Hangul: return kKorean;
    case ScriptClass::Kana: return kJapanese;
    case ScriptClass::Han: return kChinese;
    case ScriptClass::Cyrillic: return kRussian;
    case ScriptClass::Devanagari: return kHindi;
    case ScriptClass::Arabic: return kArabic;
    case ScriptClass::Thai: return kThai;
    case ScriptClass::Hebrew: return kHebrew;
    default: return std::nullopt;
  }
}

std::optional<ScriptClass> language_script(const Language& lang) noexcept {
  static const std::array<std::pair<Language, ScriptClass>, 10> kTable{{
      {kEnglish, ScriptClass::Latin},    {kIndonesian, ScriptClass::Latin},
      {kKorean, ScriptClass::Hangul},    {kChinese, ScriptClass::Han},
      {kJapanese, ScriptClass::Kana},    {kRussian, ScriptClass::Cyrillic},
      {kHindi, ScriptClass::Devanagari}, {kArabic, ScriptClass::Arabic},
      {kThai, ScriptClass::Thai},        {kHebrew, ScriptClass::Hebrew},
  }};
  for (const auto& [l, c] : kTable)
    if (l == lang) return c;
  return std::nullopt;
}

std::optional<BoundaryToken> boundary_token(std::string_view text, BoundaryPosition pos) {
  const std::u32string cps = utf8::decode(text);
  std::vector<std::u32string> tokens;
  std::u32string cur;
  for (char32_t ch : cps) {
    if (classify_char(ch) == ScriptClass::Whitespace) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));

  auto strip = [](const std::u32string& tok) -> std::u32string {
    std::size_t b = 0;
    std::size_t e = tok.size();
    while (b < e && !is_letter(classify_char(tok[b]))) ++b;
    while (e > b && !is_letter(classify_char(tok[e - 1]))) --e;
    return tok.substr(b, e - b);
  };

  auto make = [](const std::u32string& stripped) -> std::optional<BoundaryToken> {
    if (stripped.empty()) return std::nullopt;
    const auto prof = script_profile(std::u32string_view(stripped));
    return BoundaryToken{utf8::encode(stripped), *prof.dominant_letter_class()};
  };

  if (pos == BoundaryPosition::First) {
    for (const auto& t : tokens) {
      if (auto bt = make(strip(t))) return bt;
    }
  } else {
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
      if (auto bt = make(strip(*it))) return bt;
    }
  }
  return std::nullopt;
}

std::optional<Language> boundary_token_language(std::string_view text, BoundaryPosition pos,
                                                const LatinResolver& resolve_latin) {
  const auto tok = boundary_token(text, pos);
  if (!tok) return std::nullopt;
  if (tok->script == ScriptClass::Latin) {
    return resolve_latin ? resolve_latin(tok->text) : std::optional<Language>(kEnglish);
  }
  return script_language(tok->script);
}

}  // namespace ola
