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

#include "ola/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "ola/errors.hpp"
#include "ola/script.hpp"
#include "ola/utf8.hpp"

namespace ola {

namespace {

constexpr std::string_view kHeader = "ola-ngram-model v1";
constexpr int kMaxOrder = 3;

}  // namespace

std::vector<std::string> extract_ngrams(std::string_view text) {
  const std::u32string cps = utf8::decode(utf8::fold_case(utf8::normalize_nfc(text)));
  std::vector<std::string> grams;
  std::u32string run;
  auto flush = [&] {
    if (run.empty()) return;
    std::u32string padded;
    padded.reserve(run.size() + 2);
    padded.push_back(U'^');
    padded += run;
    padded.push_back(U'$');
    for (int order = 1; order <= kMaxOrder; ++order) {
      if (padded.size() < static_cast<std::size_t>(order)) break;
      for (std::size_t i = 0; i + order <= padded.size(); ++i) {
        if (order == 1 && (padded[i] == U'^' || padded[i] == U'$')) continue;
        grams.push_back(utf8::encode(std::u32string_view(padded).substr(i, order)));
      }
    }
    run.clear();
  };
  for (char32_t ch : cps) {
    if (is_letter(classify_char(ch))) {
      run.push_back(ch);
    } else {
      flush();
    }
  }
  flush();
  return grams;
}

NgramModel NgramModel::train(std::span<const LabeledSentence> corpus,
                             std::span<const Language> declared, double smoothing) {
  if (!(smoothing > 0.0)) throw ConfigError("smoothing constant must be > 0");
  std::set<Language> langs(declared.begin(), declared.end());
  if (langs.empty()) {
    for (const auto& s : corpus) langs.insert(s.language);
  }
  if (langs.empty()) throw MissingLanguage("empty training corpus");

  NgramModel m;
  m.smoothing_ = smoothing;
  m.languages_.assign(langs.begin(), langs.end());
  m.tables_.resize(m.languages_.size());
  std::vector<std::size_t> sentences(m.languages_.size(), 0);
  for (const auto& s : corpus) {
    const auto it = std::find(m.languages_.begin(), m.languages_.end(), s.language);
    if (it == m.languages_.end()) continue;
    const auto idx = static_cast<std::size_t>(it - m.languages_.begin());
    ++sentences[idx];
    for (auto& g : extract_ngrams(s.text)) ++m.tables_[idx][g];
  }
  for (std::size_t i = 0; i < m.languages_.size(); ++i) {
    if (sentences[i] == 0 || m.tables_[i].empty()) {
      throw MissingLanguage("no training sentences for '" + m.languages_[i].code() + "'");
    }
  }
  m.finalize();
  return m;
}

void NgramModel::finalize() {
  std::set<std::string> vocab;
  for (const auto& t : tables_) {
    for (const auto& [g, c] : t) vocab.insert(g);
  }
  vocabulary_size_ = vocab.size();
  const std::size_t k = languages_.size();
  unseen_logprob_.assign(k, 0.0);
  std::vector<double> log_denominator(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t total = 0;
    for (const auto& [g, c] : tables_[i]) total += c;
    log_denominator[i] =
        std::log(static_cast<double>(total) + smoothing_ * static_cast<double>(vocabulary_size_));
    unseen_logprob_[i] = std::log(smoothing_) - log_denominator[i];
  }
  logprob_.clear();
  logprob_.reserve(vocab.size());
  for (const auto& g : vocab) {
    std::vector<double> lp(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto it = tables_[i].find(g);
      const double c = it == tables_[i].end() ? 0.0 : static_cast<double>(it->second);
      lp[i] = std::log(c + smoothing_) - log_denominator[i];
    }
    logprob_.emplace(g, std::move(lp));
  }
}

std::vector<double> NgramModel::log_likelihoods(std::string_view text) const {
  std::vector<double> ll(languages_.size(), 0.0);
  for (const auto& g : extract_ngrams(text)) {
    const auto it = logprob_.find(g);
    const auto& lp = it == logprob_.end() ? unseen_logprob_ : it->second;
    for (std::size_t i = 0; i < ll.size(); ++i) ll[i] += lp[i];
  }
  return ll;
}

const std::map<std::string, std::uint64_t>& NgramModel::counts(const Language& lang) const {
  const auto it = std::find(languages_.begin(), languages_.end(), lang);
  if (it == languages_.end()) throw MissingLanguage("model has no table for '" + lang.code() + "'");
  return tables_[static_cast<std::size_t>(it - languages_.begin())];
}

void NgramModel::save(std::ostream& out) const {
  std::ostringstream sm;
  sm.precision(17);
  sm << smoothing_;
  out << kHeader << '\n' << "smoothing\t" << sm.str() << '\n' << "languages";
  for (const auto& l : languages_) out << '\t' << l.code();
  out << '\n';
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    for (const auto& [g, c] : tables_[i]) out << languages_[i].code() << '\t' << g << '\t' << c << '\n';
  }
}

NgramModel NgramModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw FormatError("not an n-gram model file");
  NgramModel m;
  if (!std::getline(in, line) || line.rfind("smoothing\t", 0) != 0)
    throw FormatError("missing smoothing line");
  m.smoothing_ = std::stod(line.substr(10));
  if (!std::getline(in, line) || line.rfind("languages", 0) != 0)
    throw FormatError("missing languages line");
  {
    std::istringstream ls(line.substr(9));
    std::string code;
    while (ls >> code) m.languages_.emplace_back(code);
  }
  m.tables_.resize(m.languages_.size());
  std::size_t lineno = 3;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw FormatError("malformed row at line " + std::to_string(lineno));
    const Language lang(std::string_view(line).substr(0, t1));
    const auto it = std::find(m.languages_.begin(), m.languages_.end(), lang);
    if (it == m.languages_.end())
      throw FormatError("undeclared language at line " + std::to_string(lineno));
    m.tables_[static_cast<std::size_t>(it - m.languages_.begin())][line.substr(t1 + 1, t2 - t1 - 1)] =
        std::stoull(line.substr(t2 + 1));
  }
  for (std::size_t i = 0; i < m.languages_.size(); ++i) {
    if (m.tables_[i].empty()) throw MissingLanguage("empty table for '" + m.languages_[i].code() + "'");
  }
  m.finalize();
  return m;
}

void NgramModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  save(out);
}

NgramModel NgramModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return load(in);
}

}  // namespace ola
