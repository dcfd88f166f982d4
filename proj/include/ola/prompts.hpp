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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ola/language.hpp"
#include "ola/llm.hpp"
#include "ola/records.hpp"

namespace ola {

/// Named prompt texts. Built-in entries are compiled from resources/prompts;
/// a directory overlay replaces entries file by file.
class PromptCatalog {
 public:
  static PromptCatalog builtin();
  /// Built-in entries overridden by every regular file in `dir`.
  static PromptCatalog with_overrides(const std::string& dir);

  bool has(std::string_view name) const;
  /// Throws MissingTemplate.
  const std::string& text(std::string_view name) const;
  void set(std::string name, std::string text);

  /// Directive for a prompt framed in `frame` whose answer should be in `expected`.
  std::string oracle_directive(const Language& frame, const Language& expected) const;
  /// Reverse lookup: the language a sentence equal to some directive asks for.
  std::optional<Language> directive_language(std::string_view sentence) const;
  /// The chain-of-thought instruction in the frame language (falls back to en).
  const std::string& cot_instruction(const Language& frame) const;
  /// Synthesis template oriented for (matrix, embedded).
  const std::string& synth_template(const Language& matrix, const Language& embedded) const;
  /// Demonstration turns, alternating user/assistant.
  std::vector<ChatMessage> few_shot_turns(Setting setting) const;

 private:
  std::map<std::string, std::string, std::less<>> files_;
};

/// Replaces each `{name}` whose name is a key of `vars`. Other braces are
/// left untouched.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars);

/// Prompt text with the oracle directive appended as a final sentence.
std::string with_oracle_directive(const PromptRecord& item, const PromptCatalog& catalog);

/// Messages for `item` under `condition`. Throws MissingTemplate.
std::vector<ChatMessage> assemble_prompt(const PromptRecord& item, Condition condition,
                                         const PromptCatalog& catalog);

struct CotFields {
  std::string thought;
  std::string answer;

  friend bool operator==(const CotFields&, const CotFields&) = default;
};

/// First JSON object carrying string "thought" and "answer" keys, anywhere
/// in the text. Throws CotParseError.
CotFields parse_cot(std::string_view text);
std::string serialize_cot(const CotFields& fields);

struct LanguageDecision {
  std::optional<Language> language;  ///< empty means Others
  bool from_judge = false;
};

/// Keyword reading of a chain-of-thought decision.
std::optional<Language> classify_decision_heuristic(std::string_view thought);

/// Heuristic first; a configured judge's "language" field wins. A judge
/// reply that cannot be read keeps the heuristic result.
LanguageDecision classify_decision(std::string_view thought, LlmClient* judge = nullptr,
                                   const PromptCatalog* catalog = nullptr);

/// Tolerant JSON extraction: the first parseable object or array in `text`.
std::optional<Json> find_json(std::string_view text, bool want_object = true);

}  // namespace ola
