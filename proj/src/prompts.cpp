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

#include "ola/prompts.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <filesystem>
#include <sstream>

#include "ola/errors.hpp"
#include "ola/jsonl.hpp"
#include "ola/utf8.hpp"

namespace ola {
namespace detail {
const std::map<std::string, std::string>& embedded_resources();
}

namespace {

constexpr std::string_view kDirectiveFile = "oracle_directives.tsv";

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

struct DirectiveRow {
  Language frame;
  Language expected;
  std::string text;
};

std::vector<DirectiveRow> parse_directives(const std::string& tsv) {
  std::vector<DirectiveRow> rows;
  std::istringstream in(tsv);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    std::string_view rest = t;
    while ((pos = rest.find('\t')) != std::string_view::npos) {
      cols.emplace_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cols.emplace_back(rest);
    if (cols.size() != 3)
      throw FormatError(std::string(kDirectiveFile) + ":" + std::to_string(lineno) +
                        ": expected 3 tab-separated columns");
    rows.push_back({Language(cols[0]), Language(cols[1]), std::string(trim(cols[2]))});
  }
  return rows;
}

// Closing index of the bracket opened at `open`, skipping string literals.
std::optional<std::size_t> matching_close(std::string_view text, std::size_t open) {
  const char o = text[open];
  const char c = o == '{' ? '}' : ']';
  int depth = 0;
  bool in_str = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_str) {
      if (ch == '\\') ++i;
      else if (ch == '"') in_str = false;
      continue;
    }
    if (ch == '"') in_str = true;
    else if (ch == o) ++depth;
    else if (ch == c && --depth == 0) return i;
  }
  return std::nullopt;
}

// Escapes raw control characters inside string literals, which models emit
// when they put multi-line answers in JSON.
std::string escape_raw_controls(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (in_str) {
      if (ch == '\\' && i + 1 < s.size()) {
        out += ch;
        out += s[++i];
        continue;
      }
      if (ch == '"') in_str = false;
      if (ch == '\n') { out += "\\n"; continue; }
      if (ch == '\r') { out += "\\r"; continue; }
      if (ch == '\t') { out += "\\t"; continue; }
    } else if (ch == '"') {
      in_str = true;
    }
    out += ch;
  }
  return out;
}

std::optional<Json> try_parse(std::string_view s) {
  Json j = Json::parse(s, nullptr, false);
  if (!j.is_discarded()) return j;
  j = Json::parse(escape_raw_controls(s), nullptr, false);
  if (!j.is_discarded()) return j;
  return std::nullopt;
}

template <typename Fn>
void for_each_json(std::string_view text, bool want_object, Fn&& fn) {
  const char open = want_object ? '{' : '[';
  for (std::size_t i = text.find(open); i != std::string_view::npos;
       i = text.find(open, i + 1)) {
    const auto close = matching_close(text, i);
    if (!close) continue;
    if (auto j = try_parse(text.substr(i, *close - i + 1)); j && fn(*j)) return;
  }
}

struct Keyword {
  std::string_view text;
  Language lang;
};

const std::array<Keyword, 26> kLanguageKeywords{{
    {"english", kEnglish},     {"영어", kEnglish},        {"英语", kEnglish},
    {"英文", kEnglish},        {"英語", kEnglish},        {"inggris", kEnglish},
    {"korean", kKorean},       {"한국어", kKorean},       {"한글", kKorean},
    {"韩语", kKorean},         {"韓国語", kKorean},       {"韩文", kKorean},
    {"chinese", kChinese},     {"중국어", kChinese},      {"中文", kChinese},
    {"汉语", kChinese},        {"中国語", kChinese},      {"mandarin", kChinese},
    {"japanese", kJapanese},   {"일본어", kJapanese},     {"日本語", kJapanese},
    {"日语", kJapanese},       {"indonesian", kIndonesian}, {"인도네시아어", kIndonesian},
    {"russian", kRussian},     {"러시아어", kRussian},
}};

constexpr std::array<std::string_view, 14> kStrongBefore{
    "respond in ",  "answer in ",     "reply in ",     "response in ", "responding in ",
    "answering in ", "replying in ",  "respond using ", "answer using ", "用",
    "write the answer in ", "answer should be in ", "response should be in ", "使用"};
constexpr std::array<std::string_view, 5> kWeakBefore{"in ", "use ", "using ", "write in ",
                                                      "written in "};
constexpr std::array<std::string_view, 8> kStrongAfter{"로 답", "로 응답", "로 대답", "으로 답",
                                                       "으로 응답", "で答", "で回答", "回答"};
constexpr std::array<std::string_view, 3> kWeakAfter{"로", "으로", "で"};

int mention_strength(std::string_view text, std::size_t at, std::size_t len) {
  const auto before = text.substr(0, at);
  const auto after = text.substr(at + len);
  auto ends = [&](std::string_view m) { return before.ends_with(m); };
  auto starts = [&](std::string_view m) { return after.starts_with(m); };
  if (std::any_of(kStrongBefore.begin(), kStrongBefore.end(), ends) ||
      std::any_of(kStrongAfter.begin(), kStrongAfter.end(), starts))
    return 2;
  if (std::any_of(kWeakBefore.begin(), kWeakBefore.end(), ends) ||
      std::any_of(kWeakAfter.begin(), kWeakAfter.end(), starts))
    return 1;
  return 0;
}

std::optional<Language> judge_label(std::string_view s) {
  if (s == "English") return kEnglish;
  if (s == "Korean") return kKorean;
  if (s == "Chinese") return kChinese;
  return std::nullopt;
}

}  // namespace

PromptCatalog PromptCatalog::builtin() {
  PromptCatalog c;
  for (const auto& [k, v] : detail::embedded_resources()) c.files_.emplace(k, v);
  return c;
}

PromptCatalog PromptCatalog::with_overrides(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("prompt directory not found: " + dir);
  PromptCatalog c = builtin();
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    c.set(entry.path().filename().string(), read_file(entry.path().string()));
  }
  return c;
}

bool PromptCatalog::has(std::string_view name) const { return files_.find(name) != files_.end(); }

const std::string& PromptCatalog::text(std::string_view name) const {
  const auto it = files_.find(name);
  if (it == files_.end()) throw MissingTemplate(std::string(name));
  return it->second;
}

void PromptCatalog::set(std::string name, std::string text) {
  files_.insert_or_assign(std::move(name), std::move(text));
}

std::string PromptCatalog::oracle_directive(const Language& frame,
                                            const Language& expected) const {
  for (const auto& row : parse_directives(text(kDirectiveFile)))
    if (row.frame == frame && row.expected == expected) return row.text;
  throw MissingTemplate("no oracle directive for frame " + frame.code() + ", expected " +
                        expected.code());
}

std::optional<Language> PromptCatalog::directive_language(std::string_view sentence) const {
  const auto s = trim(sentence);
  for (const auto& row : parse_directives(text(kDirectiveFile)))
    if (s == row.text) return row.expected;
  return std::nullopt;
}

const std::string& PromptCatalog::cot_instruction(const Language& frame) const {
  const std::string name = "cot." + frame.code() + ".txt";
  return has(name) ? text(name) : text("cot.en.txt");
}

const std::string& PromptCatalog::synth_template(const Language& matrix,
                                                 const Language& embedded) const {
  return text("synth_simple." + matrix.code() + "-" + embedded.code() + ".txt");
}

std::vector<ChatMessage> PromptCatalog::few_shot_turns(Setting setting) const {
  const Json doc = Json::parse(text("few_shot.json"), nullptr, false);
  const char* key = setting == Setting::Simple ? "simple" : "complex";
  if (doc.is_discarded() || !doc.contains(key) || !doc[key].is_array())
    throw MissingTemplate(std::string("few_shot.json has no '") + key + "' demonstrations");
  std::vector<ChatMessage> turns;
  for (const auto& d : doc[key]) {
    turns.push_back({"user", d.at("user").get<std::string>()});
    turns.push_back({"assistant", d.at("assistant").get<std::string>()});
  }
  return turns;
}

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const auto it = vars.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

std::string with_oracle_directive(const PromptRecord& item, const PromptCatalog& catalog) {
  const auto frame = item.frame_language();
  if (!frame) throw ValidationError("prompt " + item.id + " has no frame language");
  const Language expected = item.expected_lang.language().value_or(*frame);
  std::string out(item.text);
  while (!out.empty() && (out.back() == ' ' || out.back() == '\n' || out.back() == '\t'))
    out.pop_back();
  out += item.setting == Setting::Simple ? " " : "\n\n";
  out += catalog.oracle_directive(*frame, expected);
  return out;
}

std::vector<ChatMessage> assemble_prompt(const PromptRecord& item, Condition condition,
                                         const PromptCatalog& catalog) {
  switch (condition) {
    case Condition::Baseline:
      return {{"user", item.text}};
    case Condition::Oracle:
      return {{"user", with_oracle_directive(item, catalog)}};
    case Condition::CoT: {
      const Language frame = item.frame_language().value_or(kEnglish);
      return {{"user", item.text + "\n\n" + catalog.cot_instruction(frame)}};
    }
    case Condition::ZeroShotSys:
      return {{"system", catalog.text("zero_shot_system.txt")}, {"user", item.text}};
    case Condition::FewShotSys: {
      std::vector<ChatMessage> msgs{{"system", catalog.text("zero_shot_system.txt")}};
      for (auto& t : catalog.few_shot_turns(item.setting)) msgs.push_back(std::move(t));
      msgs.push_back({"user", item.text});
      return msgs;
    }
  }
  throw ValidationError("unknown condition");
}

std::optional<Json> find_json(std::string_view text, bool want_object) {
  std::optional<Json> found;
  for_each_json(text, want_object, [&](const Json& j) {
    found = j;
    return true;
  });
  return found;
}

CotFields parse_cot(std::string_view text) {
  std::optional<CotFields> out;
  for_each_json(text, true, [&](const Json& j) {
    if (!j.is_object() || !j.contains("thought") || !j.contains("answer")) return false;
    if (!j["thought"].is_string()) return false;
    const auto& a = j["answer"];
    out = CotFields{j["thought"].get<std::string>(), a.is_string() ? a.get<std::string>() : a.dump()};
    return true;
  });
  if (!out) throw CotParseError("no JSON object with \"thought\" and \"answer\" keys");
  return *out;
}

std::string serialize_cot(const CotFields& fields) {
  return Json{{"thought", fields.thought}, {"answer", fields.answer}}.dump();
}

std::optional<Language> classify_decision_heuristic(std::string_view thought) {
  const std::string folded = utf8::fold_case(thought);
  const std::string_view text = folded;
  struct Mention {
    std::size_t at;
    Language lang;
    int strength;
  };
  std::vector<Mention> mentions;
  for (const auto& kw : kLanguageKeywords) {
    for (auto at = text.find(kw.text); at != std::string_view::npos;
         at = text.find(kw.text, at + 1))
      mentions.push_back({at, kw.lang, mention_strength(text, at, kw.text.size())});
  }
  if (mentions.empty()) return std::nullopt;
  std::sort(mentions.begin(), mentions.end(),
            [](const Mention& a, const Mention& b) { return a.at < b.at; });
  int best = 0;
  for (const auto& m : mentions) best = std::max(best, m.strength);
  std::optional<Language> last;
  bool mixed = false;
  for (const auto& m : mentions) {
    if (m.strength != best) continue;
    if (last && *last != m.lang) mixed = true;
    last = m.lang;
  }
  // Unmarked mentions of several languages do not state a decision.
  if (best == 0 && mixed) return std::nullopt;
  return last;
}

LanguageDecision classify_decision(std::string_view thought, LlmClient* judge,
                                   const PromptCatalog* catalog) {
  LanguageDecision d{classify_decision_heuristic(thought), false};
  if (trim(thought).empty() || judge == nullptr) return d;
  const PromptCatalog fallback = catalog ? PromptCatalog{} : PromptCatalog::builtin();
  const PromptCatalog& cat = catalog ? *catalog : fallback;
  const std::string prompt = render_template(cat.text("decision_classifier.txt"),
                                             {{"thought_text", std::string(thought)}});
  const std::string reply = judge->complete({{"user", prompt}});
  try {
    const auto j = find_json(reply);
    if (!j || !j->contains("language") || !(*j)["language"].is_string())
      throw JudgeParseError("reply has no \"language\" field");
    const auto label = (*j)["language"].get<std::string>();
    if (label != "English" && label != "Korean" && label != "Chinese" && label != "Others")
      throw JudgeParseError("unknown language label '" + label + "'");
    if (judge_label(label) != d.language)
      spdlog::debug("decision judge overrides heuristic: {}", label);
    return {judge_label(label), true};
  } catch (const JudgeParseError& e) {
    spdlog::warn("{}; keeping heuristic decision", e.what());
    return d;
  }
}

}  // namespace ola
