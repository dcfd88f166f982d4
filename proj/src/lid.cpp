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

#include "ola/lid.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "ola/errors.hpp"
#include "ola/script.hpp"

namespace ola {

namespace {

struct Shortcut {
  ScriptClass script;
  const Language* language;
};

const Shortcut kShortcuts[] = {
    {ScriptClass::Hangul, &kKorean},     {ScriptClass::Kana, &kJapanese},
    {ScriptClass::Thai, &kThai},         {ScriptClass::Hebrew, &kHebrew},
    {ScriptClass::Devanagari, &kHindi},  {ScriptClass::Arabic, &kArabic},
    {ScriptClass::Cyrillic, &kRussian},
};

bool other_cyrillic_supported(const LidConfig& cfg) {
  for (const char* c : {"uk", "bg", "sr", "mk", "be", "kk", "ky", "mn", "tg"}) {
    if (cfg.supports(Language(c))) return true;
  }
  return false;
}

}  // namespace

std::string_view lid_source_name(LidSource s) noexcept {
  switch (s) {
    case LidSource::ScriptShortcut: return "ScriptShortcut";
    case LidSource::NgramModel: return "NgramModel";
    case LidSource::External: return "External";
  }
  return "?";
}

bool LidConfig::supports(const Language& l) const {
  return std::find(supported.begin(), supported.end(), l) != supported.end();
}

LidPrediction identify_sentence(const Segment& segment, const NgramModel* model,
                                const LidConfig& config) {
  // Fenced code carries identifiers, not prose.
  if (segment.code_block) return {std::nullopt, 0.0, LidSource::ScriptShortcut};
  const ScriptProfile prof = script_profile(segment.text);
  const std::size_t letters = prof.letter_total;
  if (letters == 0) return {std::nullopt, 0.0, LidSource::ScriptShortcut};

  for (const auto& sc : kShortcuts) {
    if (!config.supports(*sc.language)) continue;
    if (sc.script == ScriptClass::Cyrillic && other_cyrillic_supported(config)) continue;
    const double r = prof.ratio(sc.script);
    if (r >= config.shortcut_threshold) return {*sc.language, r, LidSource::ScriptShortcut};
  }

  const std::size_t kana = prof.count(ScriptClass::Kana);
  const std::size_t han = prof.count(ScriptClass::Han);
  if (kana > 0 && han > 0 && config.supports(kJapanese)) {
    const double r = static_cast<double>(kana + han) / static_cast<double>(letters);
    if (r >= config.shortcut_threshold) return {kJapanese, r, LidSource::ScriptShortcut};
  }
  if (kana == 0 && config.supports(kChinese) && 2 * han > letters) {
    return {kChinese, prof.ratio(ScriptClass::Han), LidSource::ScriptShortcut};
  }

  if (letters < config.min_letters || model == nullptr) {
    return {std::nullopt, 0.0, LidSource::NgramModel};
  }
  const std::vector<double> ll = model->log_likelihoods(segment.text);
  const auto best = static_cast<std::size_t>(std::max_element(ll.begin(), ll.end()) - ll.begin());
  double denom = 0.0;
  for (double v : ll) denom += std::exp(v - ll[best]);
  return {model->languages()[best], 1.0 / denom, LidSource::NgramModel};
}

BuiltinLidBackend::BuiltinLidBackend(std::shared_ptr<const NgramModel> model, LidConfig config)
    : model_(std::move(model)), config_(std::move(config)) {}

LidPrediction BuiltinLidBackend::identify(const Segment& segment, std::string_view,
                                          std::size_t) const {
  return identify_sentence(segment, model_.get(), config_);
}

ExternalLidBackend::ExternalLidBackend(LidConfig config, std::shared_ptr<const LidBackend> fallback)
    : config_(std::move(config)), fallback_(std::move(fallback)) {}

void ExternalLidBackend::add(std::string response_id, std::size_t segment_index, Language language,
                             double confidence) {
  labels_.insert_or_assign({std::move(response_id), segment_index},
                           std::pair{language, confidence});
}

ExternalLidBackend ExternalLidBackend::load_file(const std::string& path, LidConfig config,
                                                 std::shared_ptr<const LidBackend> fallback) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read external labels " + path);
  ExternalLidBackend b(std::move(config), std::move(fallback));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      b.add(j.at("response_id").get<std::string>(), j.at("segment_index").get<std::size_t>(),
            Language(j.at("language").get<std::string>()), j.value("confidence", 1.0));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return b;
}

void ExternalLidBackend::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  for (const auto& [key, val] : labels_) {
    nlohmann::json j{{"response_id", key.first},
                     {"segment_index", key.second},
                     {"language", val.first.code()},
                     {"confidence", val.second}};
    out << j.dump() << '\n';
  }
}

LidPrediction ExternalLidBackend::identify(const Segment& segment, std::string_view response_id,
                                           std::size_t segment_index) const {
  const auto it = labels_.find({std::string(response_id), segment_index});
  if (it != labels_.end()) return {it->second.first, it->second.second, LidSource::External};
  if (fallback_) return fallback_->identify(segment, response_id, segment_index);
  return {std::nullopt, 0.0, LidSource::External};
}

std::vector<Language> ResponseLangVerdict::voting_labels() const {
  std::vector<Language> out;
  for (const auto& sl : sentence_labels) {
    if (sl.votes) out.push_back(*sl.prediction.label);
  }
  return out;
}

std::vector<SentenceLabel> label_segments(const std::vector<Segment>& segments,
                                          const LidBackend& backend, std::string_view response_id) {
  std::vector<SentenceLabel> out;
  out.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    out.push_back({segments[i], i, backend.identify(segments[i], response_id, i), false});
  }
  return out;
}

ResponseLangVerdict vote(std::vector<SentenceLabel> labels, const LidConfig& config) {
  ResponseLangVerdict v;
  bool any_long = false;
  for (const auto& sl : labels) {
    if (sl.prediction.determined() && sl.segment.letter_count >= config.min_vote_letters) {
      any_long = true;
    }
  }
  struct Tally {
    std::size_t votes = 0;
    std::size_t letters = 0;
    std::size_t first = 0;
  };
  std::map<Language, Tally> tally;
  std::size_t order = 0;
  for (auto& sl : labels) {
    sl.votes = sl.prediction.determined() &&
               (!any_long || sl.segment.letter_count >= config.min_vote_letters);
    if (!sl.votes) continue;
    auto [it, inserted] = tally.try_emplace(*sl.prediction.label);
    if (inserted) it->second.first = order;
    ++order;
    ++it->second.votes;
    it->second.letters += sl.segment.letter_count;
  }
  v.sentence_labels = std::move(labels);
  if (tally.empty()) return v;

  std::size_t top = 0;
  for (const auto& [lang, t] : tally) {
    v.voted_count[lang] = t.votes;
    top = std::max(top, t.votes);
  }
  const Language* best = nullptr;
  const Tally* best_t = nullptr;
  std::size_t tied = 0;
  for (const auto& [lang, t] : tally) {
    if (t.votes != top) continue;
    ++tied;
    if (best_t == nullptr || t.letters > best_t->letters ||
        (t.letters == best_t->letters && t.first < best_t->first)) {
      best = &lang;
      best_t = &t;
    }
  }
  v.primary = *best;
  v.tie_broken = tied > 1;
  return v;
}

ResponseLangVerdict response_verdict(std::string_view response_text, const LidBackend& backend,
                                     std::string_view response_id) {
  auto segments = segment_sentences(response_text);
  if (segments.empty()) throw EmptyResponse("response has no segments");
  return vote(label_segments(segments, backend, response_id), backend.config());
}

std::vector<LabeledSentence> load_corpus_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<LabeledSentence> out;
  for (const auto& f : files) {
    const Language lang(f.stem().string());
    std::ifstream in(f);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      out.push_back({line, lang});
    }
  }
  if (out.empty()) throw EmptyInput("no sentences under " + dir);
  return out;
}

}  // namespace ola
