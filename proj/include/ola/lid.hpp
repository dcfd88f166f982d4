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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ola/language.hpp"
#include "ola/ngram.hpp"
#include "ola/segment.hpp"

namespace ola {

enum class LidSource { ScriptShortcut, NgramModel, External };

std::string_view lid_source_name(LidSource s) noexcept;

/// Per-segment language prediction. An empty label means Undetermined.
struct LidPrediction {
  std::optional<Language> label;
  double confidence = 0.0;
  LidSource source = LidSource::NgramModel;

  bool determined() const noexcept { return label.has_value(); }
};

struct LidConfig {
  /// Languages the shortcuts may emit.
  std::vector<Language> supported{kEnglish, kKorean, kChinese, kJapanese, kRussian,
                                  kIndonesian, kThai, kHindi, kArabic, kHebrew};
  /// Minimum share of a segment's letters in one script for a shortcut.
  double shortcut_threshold = 0.8;
  /// Segments with fewer letters than this are Undetermined (after shortcuts).
  std::size_t min_letters = 1;
  /// Segments with fewer letters than this do not vote, unless no segment
  /// has enough letters.
  std::size_t min_vote_letters = 5;

  bool supports(const Language& l) const;
};

/// Identifies one segment: script shortcuts first, then the n-gram model.
/// Fenced code blocks are Undetermined.
///
/// Shortcut scripts map to one language each (Hangul→ko, Kana→ja, Thai→th,
/// Hebrew→he, Devanagari→hi, Arabic→ar, Cyrillic→ru when ru is the only
/// supported Cyrillic language) and fire at `shortcut_threshold`. Any Kana
/// alongside Han resolves to ja; Han-majority text otherwise resolves to zh.
/// `model` may be null, in which case non-shortcut segments are Undetermined.
LidPrediction identify_sentence(const Segment& segment, const NgramModel* model,
                                const LidConfig& config);

/// Pluggable per-segment language identifier.
class LidBackend {
 public:
  virtual ~LidBackend() = default;
  virtual LidPrediction identify(const Segment& segment, std::string_view response_id,
                                 std::size_t segment_index) const = 0;
  virtual const LidConfig& config() const = 0;
};

/// Built-in backend: shortcuts plus a trained n-gram model.
class BuiltinLidBackend final : public LidBackend {
 public:
  BuiltinLidBackend(std::shared_ptr<const NgramModel> model, LidConfig config = {});

  LidPrediction identify(const Segment& segment, std::string_view response_id,
                         std::size_t segment_index) const override;
  const LidConfig& config() const override { return config_; }
  const NgramModel* model() const noexcept { return model_.get(); }

 private:
  std::shared_ptr<const NgramModel> model_;
  LidConfig config_;
};

/// Precomputed labels keyed by (response_id, segment_index), read from a
/// line-delimited JSON sidecar of
/// {"response_id", "segment_index", "language", "confidence"} records.
/// Unknown keys fall through to `fallback` when set, else Undetermined.
class ExternalLidBackend final : public LidBackend {
 public:
  explicit ExternalLidBackend(LidConfig config = {},
                              std::shared_ptr<const LidBackend> fallback = nullptr);

  static ExternalLidBackend load_file(const std::string& path, LidConfig config = {},
                                      std::shared_ptr<const LidBackend> fallback = nullptr);

  void add(std::string response_id, std::size_t segment_index, Language language,
           double confidence);
  void save_file(const std::string& path) const;
  std::size_t size() const noexcept { return labels_.size(); }

  LidPrediction identify(const Segment& segment, std::string_view response_id,
                         std::size_t segment_index) const override;
  const LidConfig& config() const override { return config_; }

 private:
  LidConfig config_;
  std::shared_ptr<const LidBackend> fallback_;
  std::map<std::pair<std::string, std::size_t>, std::pair<Language, double>> labels_;
};

struct SentenceLabel {
  Segment segment;
  std::size_t index = 0;  ///< position among the response's segments
  LidPrediction prediction;
  bool votes = false;
};

struct ResponseLangVerdict {
  std::optional<Language> primary;
  std::vector<SentenceLabel> sentence_labels;
  std::map<Language, std::size_t> voted_count;
  bool tie_broken = false;

  bool determined() const noexcept { return primary.has_value(); }
  /// Labels of the voting segments, in text order.
  std::vector<Language> voting_labels() const;
};

/// Identifies every segment (votes not yet assigned).
std::vector<SentenceLabel> label_segments(const std::vector<Segment>& segments,
                                          const LidBackend& backend,
                                          std::string_view response_id = {});

/// Majority vote over labeled segments.
///
/// Determined segments with at least `min_vote_letters` letters vote; if
/// none qualifies, every determined segment votes. Ties go to the larger
/// total letter count among the tied languages, then to the language that
/// voted first. Primary is Undetermined only when nothing votes.
ResponseLangVerdict vote(std::vector<SentenceLabel> labels, const LidConfig& config);

/// Segments, identifies and votes. Throws EmptyResponse when the text has
/// no segments.
ResponseLangVerdict response_verdict(std::string_view response_text, const LidBackend& backend,
                                     std::string_view response_id = {});

/// Reads every "<lang>.txt" file in `dir`, one sentence per non-empty line.
std::vector<LabeledSentence> load_corpus_dir(const std::string& dir);

}  // namespace ola
