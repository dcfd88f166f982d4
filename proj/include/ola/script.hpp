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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ola/language.hpp"

namespace ola {

/// Coarse script class of a Unicode scalar.
///
/// Letters (general category L* and combining marks) are bucketed by their
/// Unicode Script property; Hiragana and Katakana share `Kana`. Common or
/// Inherited letters whose Script_Extensions name a single class take that
/// class. White_Space wins over everything, then decimal digits, then
/// punctuation (P*); anything else, including unassigned code points, is
/// `OtherSymbol`.
enum class ScriptClass : std::uint8_t {
  Latin,
  Hangul,
  Han,
  Kana,
  Cyrillic,
  Devanagari,
  Arabic,
  Thai,
  Hebrew,
  Digit,
  Punctuation,
  Whitespace,
  OtherLetter,
  OtherSymbol,
};

inline constexpr std::size_t kScriptClassCount = 14;

ScriptClass classify_char(char32_t ch) noexcept;

constexpr bool is_letter(ScriptClass c) noexcept {
  switch (c) {
    case ScriptClass::Digit:
    case ScriptClass::Punctuation:
    case ScriptClass::Whitespace:
    case ScriptClass::OtherSymbol:
      return false;
    default:
      return true;
  }
}

std::string_view script_name(ScriptClass c) noexcept;
std::optional<ScriptClass> parse_script_class(std::string_view name) noexcept;

/// Per-class character tallies of a text.
struct ScriptProfile {
  std::array<std::size_t, kScriptClassCount> counts{};
  std::size_t letter_total = 0;
  /// Letter classes only; empty when `letter_total == 0`.
  std::map<ScriptClass, double> ratios;

  std::size_t count(ScriptClass c) const noexcept {
    return counts[static_cast<std::size_t>(c)];
  }
  double ratio(ScriptClass c) const noexcept;
  /// Letter class with the most letters (first in enum order on ties).
  std::optional<ScriptClass> dominant_letter_class() const noexcept;
};

ScriptProfile script_profile(std::string_view text);
ScriptProfile script_profile(std::u32string_view text);
/// Profile from raw counts; recomputes letter_total and ratios.
ScriptProfile profile_from_counts(const std::array<std::size_t, kScriptClassCount>& counts);

/// Language conventionally written in a script, for scripts that pin one
/// down: Hangul→ko, Kana→ja, Han→zh, Cyrillic→ru, Devanagari→hi,
/// Arabic→ar, Thai→th, Hebrew→he. Latin and the non-letter classes → nullopt.
std::optional<Language> script_language(ScriptClass c) noexcept;
/// Main script of a supported language (Latin for en and id).
std::optional<ScriptClass> language_script(const Language& lang) noexcept;

enum class BoundaryPosition { First, Last };

struct BoundaryToken {
  std::string text;      ///< token with non-letter edges stripped
  ScriptClass script;    ///< majority letter class
};

/// Selects the first or last whitespace-delimited token that still has
/// letters after stripping its non-letter edges. Returns nullopt when the
/// text has no such token.
std::optional<BoundaryToken> boundary_token(std::string_view text, BoundaryPosition pos);

/// Resolves a Latin-script token to a language (e.g. en vs id).
using LatinResolver = std::function<std::optional<Language>(std::string_view token)>;

/// Language of the boundary token: its majority script mapped through
/// script_language(). Latin tokens go to `resolve_latin` when given, and to
/// English otherwise. nullopt means Undetermined.
std::optional<Language> boundary_token_language(std::string_view text, BoundaryPosition pos,
                                                const LatinResolver& resolve_latin = {});

}  // namespace ola
