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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ola/language.hpp"
#include "ola/lid.hpp"
#include "ola/llm.hpp"
#include "ola/prompts.hpp"
#include "ola/records.hpp"

namespace ola {

/// passes/n as a percentage. Text form is rounded half-up to two decimals
/// with exact integer arithmetic.
struct Rate {
  std::uint64_t passes = 0;
  std::uint64_t n = 0;

  double value() const noexcept { return n ? 100.0 * double(passes) / double(n) : 0.0; }
  std::string str() const;
  /// Hundredths of a percent, rounded half-up.
  std::int64_t hundredths() const noexcept;
};

/// Formats hundredths of a percent as "57.36" (negative values get "-").
std::string format_hundredths(std::int64_t h);

enum class ScoredSpan { Whole, TaskContentOnly };
std::string_view to_string(ScoredSpan s) noexcept;

/// One segment of a decomposed response. `span_*` are code point offsets
/// of the tiled span that owns the segment.
struct PartSegment {
  SentenceLabel label;
  std::size_t span_start = 0;
  std::size_t span_end = 0;
  std::string span_text;
  bool meta = false;
};

struct Decomposition {
  std::vector<PartSegment> parts;  ///< every segment, in text order
  bool from_judge = false;
  /// True when the heuristic would have marked every segment as meta.
  bool abstained = false;

  std::vector<Segment> meta_segments() const;
  std::vector<Segment> task_segments() const;
  std::vector<SentenceLabel> task_labels() const;
  /// Concatenation of every span in offset order; equals the input text.
  std::string reconstruct() const;
};

struct JudgeContext {
  LlmClient* judge = nullptr;
  const PromptCatalog* catalog = nullptr;
};

/// Splits a response into meta remarks and task content.
///
/// Heuristic: a leading run of instruction-language segments is meta up to
/// its last segment that ends with a colon or precedes a blank line or a
/// markdown block; one colon-ended lead-in right after the run joins it. A
/// trailing instruction-language run that follows a blank line or markdown
/// block is meta too. A configured judge overrides the heuristic; an
/// unreadable judge reply keeps the heuristic partition.
Decomposition decompose_and_verify(std::string_view response_text, const Language& instruction_lang,
                                   const Language& content_lang, const LidBackend& backend,
                                   const JudgeContext& judge = {},
                                   std::string_view response_id = {});

/// Heuristic partition of already-labelled segments.
Decomposition decompose_heuristic(std::string_view response_text,
                                  const std::vector<SentenceLabel>& labels,
                                  const Language& instruction_lang);

struct EvalResult {
  std::string prompt_id;
  std::string model_id;
  Condition condition = Condition::Baseline;
  std::size_t sample_index = 0;
  Setting setting = Setting::Simple;
  std::string config_label;
  ExpectedLanguage expected = kEnglish;
  ResponseLangVerdict verdict;
  bool pass = false;
  ScoredSpan scored_text_span = ScoredSpan::Whole;
  std::size_t meta_segment_count = 0;
  bool cot_unparsed = false;  ///< CoT reply had no JSON; raw text was scored

  std::string response_id() const;
};

/// Scores one response. Complex items expecting the content language are
/// decomposed first and scored on task content only. Throws EmptyResponse,
/// and JudgeUnavailable when the heuristic abstains without a judge.
EvalResult judge(const PromptRecord& prompt, const ResponseRecord& response,
                 const LidBackend& backend, const JudgeContext& judge_ctx = {});

using GroupKeyFn = std::function<std::string(const EvalResult&)>;

struct RateTable {
  std::map<std::string, Rate> cells;
  /// response ids behind each cell
  std::map<std::string, std::vector<std::string>> members;
};

/// Pass rate per group. Throws EmptyGroupSet on empty input.
RateTable pass_rate(const std::vector<EvalResult>& results, const GroupKeyFn& group_by);

struct CotItem {
  std::optional<Language> decided;  ///< empty means Others
  ResponseLangVerdict answer;
};

/// Share of items whose decided language equals the answer's primary
/// language. Throws EmptyGroupSet.
Rate cot_consistency(const std::vector<CotItem>& items);

}  // namespace ola
