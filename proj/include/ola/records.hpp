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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ola/language.hpp"

namespace ola {

using Json = nlohmann::json;

enum class Setting { Simple, Complex };
enum class Category { InstructionLanguage, ContentLanguage };
enum class Position { InstrFirst, ContentFirst };
enum class Condition { Baseline, Oracle, CoT, ZeroShotSys, FewShotSys };

std::string_view to_string(Setting v) noexcept;
std::string_view to_string(Category v) noexcept;
std::string_view to_string(Position v) noexcept;
std::string_view to_string(Condition v) noexcept;
Setting parse_setting(std::string_view s);
Category parse_category(std::string_view s);
Position parse_position(std::string_view s);
Condition parse_condition(std::string_view s);

/// Expected output language: one concrete language or "Either".
class ExpectedLanguage {
 public:
  ExpectedLanguage(Language l) : lang_(l) {}  // NOLINT(implicit)
  static ExpectedLanguage either() { return ExpectedLanguage(); }
  static ExpectedLanguage parse(std::string_view s);

  bool is_either() const noexcept { return !lang_.has_value(); }
  const std::optional<Language>& language() const noexcept { return lang_; }
  /// True when a response in `primary` satisfies the expectation.
  bool accepts(const std::optional<Language>& primary) const noexcept;
  std::string str() const { return lang_ ? lang_->code() : "Either"; }

  friend bool operator==(const ExpectedLanguage&, const ExpectedLanguage&) = default;

 private:
  ExpectedLanguage() = default;
  std::optional<Language> lang_;
};

/// One benchmark item.
struct PromptRecord {
  std::string id;
  Setting setting = Setting::Simple;
  std::string text;
  std::optional<Language> matrix_lang;       // Simple
  std::optional<Language> embedded_lang;     // Simple
  std::optional<Language> instruction_lang;  // Complex
  std::optional<Language> content_lang;      // Complex
  ExpectedLanguage expected_lang = kEnglish;
  std::optional<Category> category;          // Complex
  std::optional<Position> position;          // Complex
  std::optional<std::string> template_id;
  std::optional<std::size_t> content_index;  // Complex: which content variation
  std::optional<int> cs_level;               // Simple: requested insertion percent
  std::string source;

  /// Throws ValidationError when the setting-specific invariants fail.
  void validate() const;
  /// Language that frames the prompt: matrix (Simple) or instruction (Complex).
  std::optional<Language> frame_language() const;
  /// Report label, e.g. "EN Matrix--KO Embed" or "KO Inst--EN Content".
  std::string config_label() const;

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

/// One model response under a prompt condition.
struct ResponseRecord {
  std::string prompt_id;
  std::string model_id;
  Condition condition = Condition::Baseline;
  std::size_t sample_index = 0;
  std::string text;
  std::optional<std::string> thought;  // CoT only
  Json params = Json::object();

  void validate() const;
  /// "<prompt_id>|<model_id>|<condition>|<sample_index>"; keys sidecar labels.
  std::string response_id() const;

  friend bool operator==(const ResponseRecord&, const ResponseRecord&) = default;
};

Json to_json(const PromptRecord& p);
PromptRecord prompt_from_json(const Json& j);
Json to_json(const ResponseRecord& r);
ResponseRecord response_from_json(const Json& j);

}  // namespace ola
