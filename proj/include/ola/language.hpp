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
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace ola {

/// ISO 639-1 language code (two lowercase ASCII letters).
class Language {
 public:
  /// Throws InvalidLanguage unless `code` is exactly two lowercase letters.
  explicit Language(std::string_view code);

  std::string code() const { return {code_.data(), 2}; }

  friend auto operator<=>(const Language&, const Language&) = default;
  friend bool operator==(const Language&, const Language&) = default;

 private:
  std::array<char, 2> code_{};
};

inline const Language kEnglish{"en"};
inline const Language kKorean{"ko"};
inline const Language kChinese{"zh"};
inline const Language kJapanese{"ja"};
inline const Language kRussian{"ru"};
inline const Language kIndonesian{"id"};
inline const Language kThai{"th"};
inline const Language kHindi{"hi"};
inline const Language kArabic{"ar"};
inline const Language kHebrew{"he"};

/// English display name ("English", "Korean", ...); the upper-cased code for
/// languages without a built-in name.
std::string language_name(const Language& lang);

/// Upper-case code used in report headers ("EN", "KO").
std::string language_tag(const Language& lang);

/// Parses a code or returns nullopt (no throw).
std::optional<Language> try_parse_language(std::string_view code);

}  // namespace ola

template <>
struct std::hash<ola::Language> {
  std::size_t operator()(const ola::Language& l) const noexcept {
    return std::hash<std::string>{}(l.code());
  }
};
