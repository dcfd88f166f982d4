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

#include "ola/language.hpp"

#include <cctype>

#include "ola/errors.hpp"

namespace ola {

namespace {

bool valid_code(std::string_view code) {
  return code.size() == 2 && code[0] >= 'a' && code[0] <= 'z' &&
         code[1] >= 'a' && code[1] <= 'z';
}

}  // namespace

Language::Language(std::string_view code) {
  if (!valid_code(code)) {
    throw InvalidLanguage("'" + std::string(code) +
                          "' is not a two-letter lowercase ISO 639-1 code");
  }
  code_ = {code[0], code[1]};
}

std::optional<Language> try_parse_language(std::string_view code) {
  if (!valid_code(code)) return std::nullopt;
  return Language(code);
}

std::string language_name(const Language& lang) {
  const std::string c = lang.code();
  if (c == "en") return "English";
  if (c == "ko") return "Korean";
  if (c == "zh") return "Chinese";
  if (c == "ja") return "Japanese";
  if (c == "ru") return "Russian";
  if (c == "id") return "Indonesian";
  if (c == "th") return "Thai";
  if (c == "hi") return "Hindi";
  if (c == "ar") return "Arabic";
  if (c == "he") return "Hebrew";
  return language_tag(lang);
}

std::string language_tag(const Language& lang) {
  std::string c = lang.code();
  for (auto& ch : c) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return c;
}

}  // namespace ola
