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
#include <utility>
#include <vector>

#include "ola/evaluation.hpp"
#include "ola/language.hpp"
#include "ola/lid.hpp"
#include "ola/llm.hpp"
#include "ola/prompts.hpp"
#include "ola/records.hpp"

namespace ola {

// ---- source filtering ----

struct FilterPattern {
  std::string reason;
  std::string regex;  ///< ECMAScript, matched case-insensitively
};

/// Translation requests and explicit output-language requests in EN, KO,
/// JA and ZH.
std::vector<FilterPattern> default_filter_patterns();

struct FilterResult {
  std::vector<std::string> kept;
  std::vector<std::pair<std::string, std::string>> rejected;  ///< (query, reason)
};

FilterResult filter_source_queries(const std::vector<std::string>& queries,
                                   const std::vector<FilterPattern>& patterns = default_filter_patterns());

// ---- Simple setting ----

struct ParallelPair {
  std::string english_text;
  std::string other_text;
  Language other_lang = kKorean;
  std::string source_id;
};

/// Reads tab-separated (source_id, english, other[, lang]) rows or line-JSON
/// objects with the same field names. Language defaults to ko.
std::vector<ParallelPair> read_parallel_pairs(const std::string& path);

struct ValidationBounds {
  double min_matrix_ratio = 0.4;
  double max_matrix_ratio = 0.95;
};

struct Violation {
  std::string code;  ///< missing_script, matrix_ratio, embedded_sentence, boundary
  std::string detail;
};

/// Script-level checks standing in for "matrix syntax preserved". `source`,
/// when given, is the matrix-language original whose final terminator must
/// survive.
std::vector<Violation> validate_cs_prompt(std::string_view text, const Language& matrix,
                                          const Language& embedded,
                                          const ValidationBounds& bounds = {},
                                          std::optional<std::string_view> source = std::nullopt);

struct SynthOptions {
  int max_attempts = 3;
  ValidationBounds bounds;
};

/// One code-switched prompt for `pair` with `matrix` as the frame. Throws
/// GenerationRejected after `max_attempts` invalid generations.
PromptRecord synth_simple(const ParallelPair& pair, const Language& matrix, int level,
                          LlmClient& llm, const PromptCatalog& catalog,
                          const SynthOptions& options = {});

// ---- Complex setting ----

struct ComplexTemplate {
  std::string template_id;
  std::string instruction_text;
  Language instruction_lang = kEnglish;
  Language content_lang = kKorean;
  Category category = Category::InstructionLanguage;
  std::vector<std::string> contents;
};

ComplexTemplate template_from_json(const Json& j);
Json to_json(const ComplexTemplate& t);

/// |contents| × 2 prompts, instruction before and after each content,
/// separated by a blank line. Throws EmptyTemplate.
std::vector<PromptRecord> instantiate_complex(const ComplexTemplate& t);

/// Asks the model for new contents and keeps those of 200–600 code points
/// that differ from every existing content.
std::vector<std::string> generate_content_variations(const ComplexTemplate& t, LlmClient& llm,
                                                     const PromptCatalog& catalog);

// ---- annotation ----

enum class Severity { Trivial, Uncomfortable, Critical };
std::string_view to_string(Severity s) noexcept;
/// Case-insensitive. Throws ValidationError.
Severity parse_severity(std::string_view s);

struct AnnotationRecord {
  std::string item_id;
  std::string annotator_id;
  ExpectedLanguage expected_lang = kEnglish;
  Severity severity = Severity::Trivial;
  std::string submitted_at;  ///< ISO-8601 UTC

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

Json to_json(const AnnotationRecord& r);
/// Accepts {item_id, annotator_id, expected_lang, severity[, submitted_at]}
/// and the short form {item, annotator, expected, severity}. Throws
/// ValidationError.
AnnotationRecord annotation_from_json(const Json& j);

struct AnnotationOutcome {
  std::map<std::string, ExpectedLanguage> accepted;
  std::vector<std::string> rejected;
  /// Items where at least min_agree annotators chose Uncomfortable or Critical.
  Rate severe;
};

/// Latest record per (item, annotator) wins. An item is accepted when one
/// expected-language value has at least `min_agree` votes and strictly more
/// than any other value.
AnnotationOutcome aggregate_annotations(const std::vector<AnnotationRecord>& records,
                                        std::size_t min_agree = 2);

// ---- preference pairs ----

enum class ChosenSource { Sampled, ForcedExplicit };
std::string_view to_string(ChosenSource s) noexcept;

struct PreferencePair {
  std::string prompt_id;
  std::string prompt_text;
  std::string chosen;
  std::string rejected;
  Language matrix_lang = kEnglish;
  ChosenSource chosen_source = ChosenSource::Sampled;
};

Json to_json(const PreferencePair& p);
PreferencePair pair_from_json(const Json& j);

struct PreferenceOptions {
  std::size_t samples = 4;
  bool forced_fallback = true;
};

/// Pair for one Simple prompt. Throws NoPairPossible when the samples hold
/// no off-matrix response, or no on-matrix response can be obtained.
PreferencePair build_preference_pair(const PromptRecord& prompt, LlmClient& model,
                                     const LidBackend& backend, const PromptCatalog& catalog,
                                     const PreferenceOptions& options = {});

struct PreferenceBuild {
  std::vector<PreferencePair> pairs;
  std::vector<std::pair<std::string, std::string>> skipped;  ///< (prompt id, reason)
};

PreferenceBuild build_preference_pairs(const std::vector<PromptRecord>& prompts, LlmClient& model,
                                       const LidBackend& backend, const PromptCatalog& catalog,
                                       const PreferenceOptions& options = {});

}  // namespace ola
