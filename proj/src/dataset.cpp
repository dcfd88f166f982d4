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

#include "ola/dataset.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <tuple>

#include "ola/errors.hpp"
#include "ola/jsonl.hpp"
#include "ola/script.hpp"
#include "ola/segment.hpp"
#include "ola/utf8.hpp"

namespace ola {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
  return out;
}

// Last code point of the trimmed text.
std::optional<char32_t> last_char(std::string_view s) {
  const auto cps = utf8::decode(trim(s));
  if (cps.empty()) return std::nullopt;
  return cps.back();
}

bool is_terminator(char32_t c) {
  return c == U'.' || c == U'?' || c == U'!' || c == U'。' || c == U'？' || c == U'！';
}

const char* kLanguageNames =
    "english|korean|chinese|mandarin|japanese|french|spanish|german|italian|portuguese|"
    "russian|arabic|hindi|thai|vietnamese|indonesian";

}  // namespace

std::vector<FilterPattern> default_filter_patterns() {
  const std::string names = kLanguageNames;
  return {
      {"translation request", R"(\btranslat(e|es|ed|ing|ion|ions)\b)"},
      {"translation request", "번역|通訳|翻訳|翻译|翻譯"},
      {"explicit output language",
       R"(\b(respond|answer|reply|write|speak|explain|say|tell)\b[^.?!\n]{0,40}\b(in|using)\s+()" +
           names + R"()\b)"},
      {"explicit output language", R"(\b(in|into)\s+()" + names + R"()\s*[:?!.,]?\s*$)"},
      {"explicit output language", "(영어|한국어|중국어|일본어|한글|영문)(로|으로)\\s*(대답|답|응답|작성|써|쓰|말|설명)"},
      {"explicit output language", "(英語|日本語|韓国語|中国語)で(答|回答|書|説明)"},
      {"explicit output language", "答えて.{0,20}(英語|日本語|韓国語|中国語)で"},
      {"explicit output language", "用(英语|英文|中文|汉语|韩语|日语)(回答|回复|写|说明)"},
  };
}

FilterResult filter_source_queries(const std::vector<std::string>& queries,
                                   const std::vector<FilterPattern>& patterns) {
  std::vector<std::pair<std::string, std::regex>> compiled;
  compiled.reserve(patterns.size());
  for (const auto& p : patterns) {
    try {
      compiled.emplace_back(p.reason, std::regex(p.regex, std::regex::ECMAScript | std::regex::icase));
    } catch (const std::regex_error& e) {
      throw ConfigError("bad filter pattern '" + p.regex + "': " + e.what());
    }
  }
  FilterResult out;
  for (const auto& q : queries) {
    const std::string folded = lower_ascii(q);
    const auto hit = std::find_if(compiled.begin(), compiled.end(), [&](const auto& c) {
      return std::regex_search(folded, c.second);
    });
    if (hit == compiled.end()) out.kept.push_back(q);
    else out.rejected.emplace_back(q, hit->first);
  }
  return out;
}

std::vector<ParallelPair> read_parallel_pairs(const std::string& path) {
  std::vector<ParallelPair> out;
  if (path.ends_with(".jsonl") || path.ends_with(".json")) {
    for (const auto& j : jsonl::read(path)) {
      ParallelPair p;
      p.source_id = j.value("source_id", "");
      p.english_text = j.at("english").get<std::string>();
      p.other_text = j.at("other").get<std::string>();
      p.other_lang = Language(j.value("lang", std::string("ko")));
      out.push_back(std::move(p));
    }
    return out;
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0, tab;
    while ((tab = line.find('\t', start)) != std::string::npos) {
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    cols.push_back(line.substr(start));
    if (cols.size() < 3)
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected id, english, other");
    out.push_back({cols[1], cols[2], Language(cols.size() > 3 ? cols[3] : "ko"), cols[0]});
  }
  return out;
}

std::vector<Violation> validate_cs_prompt(std::string_view text, const Language& matrix,
                                          const Language& embedded, const ValidationBounds& bounds,
                                          std::optional<std::string_view> source) {
  std::vector<Violation> v;
  const auto ms = language_script(matrix);
  const auto es = language_script(embedded);
  if (!ms || !es) {
    v.push_back({"unsupported", "no script known for " + matrix.code() + "/" + embedded.code()});
    return v;
  }
  const auto profile = script_profile(text);
  if (*ms != *es) {
    if (profile.count(*ms) == 0)
      v.push_back({"missing_script", "no " + std::string(script_name(*ms)) + " letters"});
    if (profile.count(*es) == 0)
      v.push_back({"missing_script", "no " + std::string(script_name(*es)) + " letters"});
    if (profile.letter_total > 0) {
      const double r = profile.ratio(*ms);
      if (r < bounds.min_matrix_ratio || r > bounds.max_matrix_ratio)
        v.push_back({"matrix_ratio", "matrix letter ratio " + std::to_string(r) + " outside [" +
                                         std::to_string(bounds.min_matrix_ratio) + ", " +
                                         std::to_string(bounds.max_matrix_ratio) + "]"});
    }
    const auto segments = segment_sentences(text);
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const auto sp = script_profile(segments[i].text);
      if (sp.letter_total > 0 && sp.count(*es) == sp.letter_total)
        v.push_back({"embedded_sentence", "sentence " + std::to_string(i + 1) +
                                              " has only embedded-language letters"});
    }
  }
  static const std::regex kTag(R"(<\s*/?\s*(English|Korean|Code-Switch)\s*>)");
  const std::string s(text);
  if (std::regex_search(s, kTag)) v.push_back({"boundary", "generation tag left in text"});
  for (auto [o, c] : {std::pair{'(', ')'}, std::pair{'[', ']'}, std::pair{'{', '}'}}) {
    if (std::count(s.begin(), s.end(), o) != std::count(s.begin(), s.end(), c))
      v.push_back({"boundary", std::string("unbalanced ") + o + c});
  }
  if (source) {
    const auto want = last_char(*source);
    if (want && is_terminator(*want) && last_char(text) != want)
      v.push_back({"boundary", "final terminator of the source was not kept"});
  }
  return v;
}

PromptRecord synth_simple(const ParallelPair& pair, const Language& matrix, int level,
                          LlmClient& llm, const PromptCatalog& catalog,
                          const SynthOptions& options) {
  if (matrix != kEnglish && matrix != pair.other_lang)
    throw ValidationError("matrix " + matrix.code() + " is not a language of pair " + pair.source_id);
  const bool en_matrix = matrix == kEnglish;
  const Language embedded = en_matrix ? pair.other_lang : kEnglish;
  const std::string& matrix_text = en_matrix ? pair.english_text : pair.other_text;
  const std::string& embedded_text = en_matrix ? pair.other_text : pair.english_text;
  const std::string prompt =
      render_template(catalog.synth_template(matrix, embedded),
                      {{"level", std::to_string(level)},
                       {"question", matrix_text},
                       {"translation", embedded_text}});

  std::string reasons;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::string out(trim(llm.complete({{"user", prompt}}, static_cast<std::size_t>(attempt))));
    if (out.starts_with("<Code-Switch>")) out = std::string(trim(out.substr(13)));
    const auto violations = validate_cs_prompt(out, matrix, embedded, options.bounds, matrix_text);
    if (violations.empty()) {
      PromptRecord r;
      r.id = pair.source_id + "-" + matrix.code() + "-l" + std::to_string(level);
      r.setting = Setting::Simple;
      r.text = out;
      r.matrix_lang = matrix;
      r.embedded_lang = embedded;
      r.expected_lang = matrix;
      r.cs_level = level;
      r.source = pair.source_id;
      return r;
    }
    for (const auto& x : violations) reasons += "; attempt " + std::to_string(attempt + 1) + ": " + x.detail;
  }
  throw GenerationRejected(pair.source_id + reasons);
}

ComplexTemplate template_from_json(const Json& j) {
  try {
    ComplexTemplate t;
    t.template_id = j.at("template_id").get<std::string>();
    t.instruction_text = j.at("instruction").get<std::string>();
    t.instruction_lang = Language(j.at("instruction_lang").get<std::string>());
    t.content_lang = Language(j.at("content_lang").get<std::string>());
    t.category = parse_category(j.at("category").get<std::string>());
    t.contents = j.at("contents").get<std::vector<std::string>>();
    return t;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("template record: ") + e.what());
  }
}

Json to_json(const ComplexTemplate& t) {
  return {{"template_id", t.template_id},         {"instruction", t.instruction_text},
          {"instruction_lang", t.instruction_lang.code()}, {"content_lang", t.content_lang.code()},
          {"category", to_string(t.category)},    {"contents", t.contents}};
}

std::vector<PromptRecord> instantiate_complex(const ComplexTemplate& t) {
  if (t.contents.empty()) throw EmptyTemplate("template " + t.template_id + " has no content");
  if (t.instruction_lang == t.content_lang)
    throw ValidationError("template " + t.template_id + " uses one language for both parts");
  std::vector<PromptRecord> out;
  out.reserve(t.contents.size() * 2);
  for (std::size_t c = 0; c < t.contents.size(); ++c) {
    for (Position pos : {Position::InstrFirst, Position::ContentFirst}) {
      PromptRecord r;
      const bool instr_first = pos == Position::InstrFirst;
      r.id = t.template_id + "-c" + std::to_string(c) + (instr_first ? "-if" : "-cf");
      r.setting = Setting::Complex;
      r.text = instr_first ? t.instruction_text + "\n\n" + t.contents[c]
                           : t.contents[c] + "\n\n" + t.instruction_text;
      r.instruction_lang = t.instruction_lang;
      r.content_lang = t.content_lang;
      r.category = t.category;
      r.expected_lang =
          t.category == Category::InstructionLanguage ? t.instruction_lang : t.content_lang;
      r.position = pos;
      r.template_id = t.template_id;
      r.content_index = c;
      r.source = t.template_id;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<std::string> generate_content_variations(const ComplexTemplate& t, LlmClient& llm,
                                                     const PromptCatalog& catalog) {
  if (t.contents.empty()) throw EmptyTemplate("template " + t.template_id + " has no content");
  const std::string prompt = render_template(
      catalog.text("content_variation.txt"),
      {{"instruction", t.instruction_text}, {"original_content", t.contents.front()}});
  const auto reply = llm.complete({{"user", prompt}});
  const auto arr = find_json(reply, false);
  if (!arr || !arr->is_array()) throw FormatError("content variation reply has no JSON array");
  std::vector<std::string> out;
  for (const auto& v : *arr) {
    if (!v.is_string()) continue;
    auto s = v.get<std::string>();
    const auto len = utf8::length(s);
    const bool dup = std::find(t.contents.begin(), t.contents.end(), s) != t.contents.end() ||
                     std::find(out.begin(), out.end(), s) != out.end();
    if (len >= 200 && len <= 600 && !dup) out.push_back(std::move(s));
  }
  return out;
}

std::string_view to_string(Severity s) noexcept {
  switch (s) {
    case Severity::Trivial: return "Trivial";
    case Severity::Uncomfortable: return "Uncomfortable";
    case Severity::Critical: return "Critical";
  }
  return "";
}

Severity parse_severity(std::string_view s) {
  const auto l = lower_ascii(s);
  if (l == "trivial") return Severity::Trivial;
  if (l == "uncomfortable") return Severity::Uncomfortable;
  if (l == "critical") return Severity::Critical;
  throw ValidationError("unknown severity '" + std::string(s) + "'");
}

Json to_json(const AnnotationRecord& r) {
  return {{"item_id", r.item_id},
          {"annotator_id", r.annotator_id},
          {"expected_lang", r.expected_lang.str()},
          {"severity", to_string(r.severity)},
          {"submitted_at", r.submitted_at}};
}

AnnotationRecord annotation_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("annotation must be a JSON object");
  auto field = [&](const char* a, const char* b) -> std::string {
    for (const char* k : {a, b}) {
      if (j.contains(k)) {
        if (!j[k].is_string()) throw ValidationError(std::string("field '") + k + "' must be a string");
        return j[k].get<std::string>();
      }
    }
    throw ValidationError(std::string("missing field '") + a + "'");
  };
  AnnotationRecord r;
  r.item_id = field("item_id", "item");
  r.annotator_id = field("annotator_id", "annotator");
  if (r.item_id.empty() || r.annotator_id.empty()) throw ValidationError("empty item or annotator id");
  const auto expected = lower_ascii(field("expected_lang", "expected"));
  if (expected == "either") r.expected_lang = ExpectedLanguage::either();
  else if (expected == "english") r.expected_lang = kEnglish;
  else if (expected == "korean") r.expected_lang = kKorean;
  else if (expected == "chinese") r.expected_lang = kChinese;
  else if (auto l = try_parse_language(expected)) r.expected_lang = *l;
  else throw ValidationError("unknown expected language '" + expected + "'");
  r.severity = parse_severity(field("severity", "severity"));
  if (j.contains("submitted_at") && j["submitted_at"].is_string())
    r.submitted_at = j["submitted_at"].get<std::string>();
  return r;
}

AnnotationOutcome aggregate_annotations(const std::vector<AnnotationRecord>& records,
                                        std::size_t min_agree) {
  auto rank = [](const AnnotationRecord& r) {
    return std::make_tuple(r.submitted_at, r.expected_lang.str(), static_cast<int>(r.severity));
  };
  std::map<std::pair<std::string, std::string>, const AnnotationRecord*> latest;
  for (const auto& r : records) {
    auto& slot = latest[{r.item_id, r.annotator_id}];
    if (slot == nullptr || rank(r) > rank(*slot)) slot = &r;
  }
  std::map<std::string, std::map<std::string, std::size_t>> votes;
  std::map<std::string, std::size_t> severe;
  std::map<std::string, ExpectedLanguage> value_of;
  for (const auto& [key, r] : latest) {
    ++votes[key.first][r->expected_lang.str()];
    value_of.insert_or_assign(r->expected_lang.str(), r->expected_lang);
    if (r->severity != Severity::Trivial) ++severe[key.first];
    else severe.try_emplace(key.first, 0);
  }
  AnnotationOutcome out;
  for (const auto& [item, counts] : votes) {
    std::string best;
    std::size_t top = 0;
    bool tied = false;
    for (const auto& [value, c] : counts) {
      if (c > top) {
        best = value;
        top = c;
        tied = false;
      } else if (c == top) {
        tied = true;
      }
    }
    if (top >= min_agree && !tied) out.accepted.emplace(item, value_of.at(best));
    else out.rejected.push_back(item);
    ++out.severe.n;
    if (severe[item] >= min_agree) ++out.severe.passes;
  }
  return out;
}

std::string_view to_string(ChosenSource s) noexcept {
  return s == ChosenSource::Sampled ? "Sampled" : "ForcedExplicit";
}

Json to_json(const PreferencePair& p) {
  return {{"prompt_id", p.prompt_id},
          {"prompt", p.prompt_text},
          {"chosen", p.chosen},
          {"rejected", p.rejected},
          {"matrix_lang", p.matrix_lang.code()},
          {"chosen_source", to_string(p.chosen_source)}};
}

PreferencePair pair_from_json(const Json& j) {
  try {
    PreferencePair p;
    p.prompt_id = j.value("prompt_id", "");
    p.prompt_text = j.at("prompt").get<std::string>();
    p.chosen = j.at("chosen").get<std::string>();
    p.rejected = j.at("rejected").get<std::string>();
    p.matrix_lang = Language(j.at("matrix_lang").get<std::string>());
    const auto src = j.at("chosen_source").get<std::string>();
    if (src == "Sampled") p.chosen_source = ChosenSource::Sampled;
    else if (src == "ForcedExplicit") p.chosen_source = ChosenSource::ForcedExplicit;
    else throw ValidationError("unknown chosen_source '" + src + "'");
    return p;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("pair record: ") + e.what());
  }
}

PreferencePair build_preference_pair(const PromptRecord& prompt, LlmClient& model,
                                     const LidBackend& backend, const PromptCatalog& catalog,
                                     const PreferenceOptions& options) {
  if (prompt.setting != Setting::Simple || !prompt.matrix_lang)
    throw ValidationError("preference pairs need a Simple prompt with a matrix language: " + prompt.id);
  const Language matrix = *prompt.matrix_lang;
  auto primary_of = [&](const std::string& text, std::size_t sample) -> std::optional<Language> {
    const std::string rid = prompt.id + "|" + model.endpoint().model_id + "|pref|" + std::to_string(sample);
    try {
      return response_verdict(text, backend, rid).primary;
    } catch (const EmptyResponse&) {
      return std::nullopt;
    }
  };

  const auto messages = assemble_prompt(prompt, Condition::Baseline, catalog);
  std::optional<std::string> chosen, rejected;
  for (std::size_t s = 0; s < options.samples; ++s) {
    auto text = model.complete(messages, s);
    const auto primary = primary_of(text, s);
    if (!primary) continue;
    if (*primary == matrix) {
      if (!chosen) chosen = std::move(text);
    } else if (!rejected) {
      rejected = std::move(text);
    }
  }
  if (!rejected) throw NoPairPossible(prompt.id + ": every sample is in the matrix language");

  PreferencePair p{prompt.id, prompt.text, "", std::move(*rejected), matrix, ChosenSource::Sampled};
  if (chosen) {
    p.chosen = std::move(*chosen);
    return p;
  }
  if (!options.forced_fallback)
    throw NoPairPossible(prompt.id + ": no sample in the matrix language and forced generation is off");
  auto forced = model.complete(assemble_prompt(prompt, Condition::Oracle, catalog), options.samples);
  if (primary_of(forced, options.samples) != matrix)
    throw NoPairPossible(prompt.id + ": forced generation missed the matrix language");
  p.chosen = std::move(forced);
  p.chosen_source = ChosenSource::ForcedExplicit;
  return p;
}

PreferenceBuild build_preference_pairs(const std::vector<PromptRecord>& prompts, LlmClient& model,
                                       const LidBackend& backend, const PromptCatalog& catalog,
                                       const PreferenceOptions& options) {
  PreferenceBuild out;
  for (const auto& p : prompts) {
    try {
      out.pairs.push_back(build_preference_pair(p, model, backend, catalog, options));
    } catch (const NoPairPossible& e) {
      spdlog::debug("{}", e.what());
      out.skipped.emplace_back(p.id, e.what());
    }
  }
  return out;
}

}  // namespace ola
