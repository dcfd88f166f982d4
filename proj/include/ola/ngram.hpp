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
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ola/language.hpp"

namespace ola {

struct LabeledSentence {
  std::string text;
  Language language;
};

/// Character n-grams (orders 1..3) of a text after NFC normalization and
/// case folding. Each maximal letter run is wrapped in '^'...'$' boundary
/// markers; non-letters only separate runs.
std::vector<std::string> extract_ngrams(std::string_view text);

/// Additively smoothed character n-gram language model, one table per
/// language. Immutable once trained or loaded.
class NgramModel {
 public:
  static constexpr double kDefaultSmoothing = 0.5;

  /// Trains on `corpus`. `declared` lists the languages the model must
  /// cover (defaults to the languages present in the corpus); a declared
  /// language with no sentences raises MissingLanguage. Counts are
  /// aggregated per language, so corpus order does not affect the tables.
  static NgramModel train(std::span<const LabeledSentence> corpus,
                          std::span<const Language> declared = {},
                          double smoothing = kDefaultSmoothing);

  /// Line-oriented dump: a header, then one "lang<TAB>ngram<TAB>count" row
  /// per table entry in sorted order.
  void save(std::ostream& out) const;
  static NgramModel load(std::istream& in);
  void save_file(const std::string& path) const;
  static NgramModel load_file(const std::string& path);

  /// Log-likelihood of the text under each language, in languages() order.
  std::vector<double> log_likelihoods(std::string_view text) const;

  const std::vector<Language>& languages() const noexcept { return languages_; }
  double smoothing() const noexcept { return smoothing_; }
  std::size_t vocabulary_size() const noexcept { return vocabulary_size_; }
  const std::map<std::string, std::uint64_t>& counts(const Language& lang) const;

  friend bool operator==(const NgramModel& a, const NgramModel& b) {
    return a.languages_ == b.languages_ && a.smoothing_ == b.smoothing_ &&
           a.tables_ == b.tables_;
  }

 private:
  NgramModel() = default;
  void finalize();

  std::vector<Language> languages_;
  double smoothing_ = kDefaultSmoothing;
  std::vector<std::map<std::string, std::uint64_t>> tables_;
  // Derived at finalize().
  std::size_t vocabulary_size_ = 0;
  std::vector<double> unseen_logprob_;
  std::unordered_map<std::string, std::vector<double>> logprob_;
};

}  // namespace ola
