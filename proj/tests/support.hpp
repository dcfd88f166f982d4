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

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "ola/evaluation.hpp"
#include "ola/lid.hpp"
#include "ola/pipeline.hpp"
#include "ola/records.hpp"

namespace ola::test {

std::string source_path(const std::string& rel);

/// N-gram model trained once on the shipped en/id/ko corpora.
std::shared_ptr<const NgramModel> shipped_model();
const BuiltinLidBackend& shipped_backend();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

PromptRecord simple_prompt(const std::string& id, const std::string& text, const Language& matrix,
                           const Language& embedded);
PromptRecord complex_prompt(const std::string& id, const std::string& text, const Language& instr,
                            const Language& content, Category category,
                            Position position = Position::InstrFirst,
                            const std::string& template_id = {}, std::size_t content_index = 0);
ResponseRecord response(const std::string& prompt_id, const std::string& text,
                        Condition condition = Condition::Baseline, std::size_t sample = 0,
                        const std::string& model = "m");

/// Labels in `langs` with equal letter counts, as if every sentence voted.
ResponseLangVerdict verdict_of(const std::vector<Language>& langs);

// ---- generated fixtures ----

/// Simple prompts whose final word is in a chosen language. `ends_in_matrix`
/// tells, per prompt, whether the final word is in the matrix language.
struct FinalWordSet {
  std::vector<PromptRecord> prompts;
  std::vector<bool> ends_in_matrix;
};
/// en-matrix prompts: `en_total` of them, the first `en_end_en` ending in
/// English; ko-matrix prompts: `ko_total`, the first `ko_end_ko` ending in
/// Korean.
FinalWordSet final_word_prompts(std::size_t en_total, std::size_t en_end_en, std::size_t ko_total,
                                std::size_t ko_end_ko);

struct PlantedIntrusion {
  std::string text;
  Language expected = kKorean;
  std::vector<SentenceHit> sentence_truth;
  /// (start, end, language) of every planted letter run
  std::vector<std::tuple<std::size_t, std::size_t, Language>> char_truth;
};
/// `n` responses with planted ru/ja/th/hi sentences and words, and `n`
/// clean ones (some carrying Han characters).
std::vector<PlantedIntrusion> planted_intrusions(std::size_t n, std::uint32_t seed);
std::vector<PlantedIntrusion> clean_responses(std::size_t n, std::uint32_t seed);

/// Writes `rows` as line-JSON and returns the path.
std::string write_prompts(const TempDir& dir, const std::vector<PromptRecord>& rows,
                          const std::string& name = "prompts.jsonl");

/// Digest of every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> tree_digest(const std::filesystem::path& dir);

}  // namespace ola::test
