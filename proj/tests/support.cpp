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

#include "support.hpp"

#include <fstream>
#include <random>

#include "ola/jsonl.hpp"
#include "ola/script.hpp"
#include "ola/utf8.hpp"

namespace ola::test {
namespace fs = std::filesystem;

std::string source_path(const std::string& rel) { return (fs::path(OLA_SOURCE_DIR) / rel).string(); }

std::shared_ptr<const NgramModel> shipped_model() {
  static const auto model =
      std::make_shared<const NgramModel>(NgramModel::train(load_corpus_dir(source_path("resources/lid"))));
  return model;
}

const BuiltinLidBackend& shipped_backend() {
  static const BuiltinLidBackend backend(shipped_model());
  return backend;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("ola-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

PromptRecord simple_prompt(const std::string& id, const std::string& text, const Language& matrix,
                           const Language& embedded) {
  PromptRecord p;
  p.id = id;
  p.setting = Setting::Simple;
  p.text = text;
  p.matrix_lang = matrix;
  p.embedded_lang = embedded;
  p.expected_lang = matrix;
  p.source = "test";
  return p;
}

PromptRecord complex_prompt(const std::string& id, const std::string& text, const Language& instr,
                            const Language& content, Category category, Position position,
                            const std::string& template_id, std::size_t content_index) {
  PromptRecord p;
  p.id = id;
  p.setting = Setting::Complex;
  p.text = text;
  p.instruction_lang = instr;
  p.content_lang = content;
  p.category = category;
  p.position = position;
  p.template_id = template_id.empty() ? id : template_id;
  p.content_index = content_index;
  p.expected_lang = category == Category::InstructionLanguage ? instr : content;
  p.source = "test";
  return p;
}

ResponseRecord response(const std::string& prompt_id, const std::string& text, Condition condition,
                        std::size_t sample, const std::string& model) {
  ResponseRecord r;
  r.prompt_id = prompt_id;
  r.model_id = model;
  r.condition = condition;
  r.sample_index = sample;
  r.text = text;
  return r;
}

ResponseLangVerdict verdict_of(const std::vector<Language>& langs) {
  std::vector<SentenceLabel> labels;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < langs.size(); ++i) {
    SentenceLabel l;
    l.index = i;
    l.segment = {"sentence", offset, offset + 8, 8, false};
    offset += 9;
    l.prediction = {langs[i], 1.0, LidSource::NgramModel};
    labels.push_back(std::move(l));
  }
  return vote(std::move(labels), LidConfig{});
}

FinalWordSet final_word_prompts(std::size_t en_total, std::size_t en_end_en, std::size_t ko_total,
                                std::size_t ko_end_ko) {
  static const std::vector<std::string> kEnNouns{"station", "library", "weather", "budget", "garden",
                                                 "museum",  "festival", "market", "project", "river"};
  static const std::vector<std::string> kKoNouns{"역", "도서관", "날씨", "예산", "정원",
                                                 "박물관", "축제", "시장", "프로젝트", "강"};
  static const std::vector<std::string> kEnFrames{
      "Can you explain how the {mid} affects the {end}?",
      "Please tell me what you know about the {mid} near the {end}.",
      "I would like some advice about the {mid} and the {end}.",
      "What is the best way to describe the {mid} to a friend who loves the {end}?",
      "Write a short note about the {mid} for people who visit the {end}."};
  static const std::vector<std::string> kKoFrames{
      "요즘 {mid} 관련해서 가장 궁금한 것은 바로 {end}",
      "친구에게 {mid} 이야기를 해 주고 싶은데 핵심은 {end}",
      "이번 주말 계획에서 {mid} 다음으로 중요한 것은 {end}",
      "우리 동네 {mid} 소식을 알려 주세요 특히 {end}",
      "회의에서 {mid} 문제를 논의했는데 남은 과제는 {end}"};
  auto fill = [](std::string frame, const std::string& mid, const std::string& end) {
    frame.replace(frame.find("{mid}"), 5, mid);
    frame.replace(frame.find("{end}"), 5, end);
    return frame;
  };
  FinalWordSet out;
  for (std::size_t i = 0; i < en_total; ++i) {
    const bool end_en = i < en_end_en;
    const auto& end = end_en ? kEnNouns[(i * 3 + 1) % kEnNouns.size()] : kKoNouns[(i * 3 + 1) % kKoNouns.size()];
    const auto text = fill(kEnFrames[i % kEnFrames.size()], kKoNouns[i % kKoNouns.size()], end);
    out.prompts.push_back(simple_prompt("fw-en-" + std::to_string(i), text, kEnglish, kKorean));
    out.ends_in_matrix.push_back(end_en);
  }
  for (std::size_t i = 0; i < ko_total; ++i) {
    const bool end_ko = i < ko_end_ko;
    const auto& end = end_ko ? kKoNouns[(i * 7 + 2) % kKoNouns.size()] : kEnNouns[(i * 7 + 2) % kEnNouns.size()];
    const auto text = fill(kKoFrames[i % kKoFrames.size()], kEnNouns[i % kEnNouns.size()], end);
    out.prompts.push_back(simple_prompt("fw-ko-" + std::to_string(i), text, kKorean, kEnglish));
    out.ends_in_matrix.push_back(end_ko);
  }
  return out;
}

namespace {

std::vector<std::string> lines_of(const std::string& path) {
  std::vector<std::string> out;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

struct Bank {
  Language lang;
  std::vector<std::string> sentences;
  std::vector<std::string> words;
};

const std::vector<Bank>& third_banks() {
  static const std::vector<Bank> kBanks{
      {kRussian,
       {"Сегодня утром мы долго гуляли по парку.", "Эта книга оказалась очень интересной.",
        "Поезд прибывает на станцию в восемь часов."},
       {"колон", "книга", "мост"}},
      {kJapanese,
       {"きょうは とても いい てんきですね。", "あしたは ともだちと えいがを みます。",
        "この みせの ぱんは おいしいです。"},
       {"さくら", "ありがとう", "すし"}},
      {kThai,
       {"วันนี้อากาศดีมากและท้องฟ้าแจ่มใส.", "ฉันชอบอ่านหนังสือในห้องสมุด.",
        "พรุ่งนี้เราจะไปตลาดด้วยกัน."},
       {"สวัสดี", "ข้าว", "น้ำ"}},
      {kHindi,
       {"आज मौसम बहुत सुहावना है.", "मुझे किताबें पढ़ना बहुत पसंद है.",
        "कल हम बाजार जाएंगे."},
       {"नमस्ते", "किताब", "पानी"}},
  };
  return kBanks;
}

// Letter runs of a planted piece, relative to its start. Pieces contain
// one script plus spaces and trailing punctuation only.
std::vector<std::pair<std::size_t, std::size_t>> planted_runs(const std::u32string& piece) {
  auto is_sep = [](char32_t c) {
    return c == U' ' || c == U'.' || c == U'。' || c == U'?' || c == U'!';
  };
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < piece.size()) {
    if (is_sep(piece[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < piece.size() && !is_sep(piece[j])) ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  return runs;
}

class Builder {
 public:
  void sentence(const std::string& s) {
    if (!text_.empty()) add(U" ");
    add(utf8::decode(s));
    ++count_;
  }
  std::size_t planted_sentence(const std::string& s, const Language& lang, PlantedIntrusion& out) {
    if (!text_.empty()) add(U" ");
    const auto start = text_.size();
    const auto u = utf8::decode(s);
    for (const auto& [b, e] : planted_runs(u)) out.char_truth.emplace_back(start + b, start + e, lang);
    add(u);
    out.sentence_truth.push_back({count_, lang});
    return count_++;
  }
  // Inserts `word` after the `k`-th space of `base`.
  void sentence_with_word(const std::string& base, const std::string& word, std::size_t k,
                          const Language& lang, PlantedIntrusion& out) {
    if (!text_.empty()) add(U" ");
    const auto u = utf8::decode(base);
    std::size_t cut = 0, spaces = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] == U' ' && ++spaces == k) {
        cut = i + 1;
        break;
      }
    add(u.substr(0, cut));
    const auto w = utf8::decode(word);
    out.char_truth.emplace_back(text_.size(), text_.size() + w.size(), lang);
    add(w);
    add(U" ");
    add(u.substr(cut));
    ++count_;
  }
  std::string text() const { return utf8::encode(text_); }

 private:
  void add(std::u32string_view s) { text_ += s; }
  std::u32string text_;
  std::size_t count_ = 0;
};

std::vector<std::string> long_korean() {
  std::vector<std::string> out;
  for (auto& s : lines_of(source_path("resources/lid/ko.txt")))
    if (script_profile(s).count(ScriptClass::Hangul) >= 20) out.push_back(s);
  return out;
}

}  // namespace

std::vector<PlantedIntrusion> planted_intrusions(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  const auto ko = long_korean();
  const auto en = lines_of(source_path("resources/lid/en.txt"));
  const auto& banks = third_banks();
  std::vector<PlantedIntrusion> out;
  for (std::size_t i = 0; i < n; ++i) {
    PlantedIntrusion item;
    const bool english = i % 5 == 4;
    item.expected = english ? kEnglish : kKorean;
    const auto& base = english ? en : ko;
    const std::size_t len = 3 + rng() % 3;
    const std::size_t kind = i % 3;  // 0 sentence, 1 word, 2 both
    const auto& b1 = banks[rng() % banks.size()];
    const auto& b2 = banks[rng() % banks.size()];
    const std::size_t at = rng() % len;
    Builder text;
    for (std::size_t s = 0; s < len; ++s) {
      const auto& line = base[rng() % base.size()];
      if (s == at && kind != 1) text.planted_sentence(b1.sentences[rng() % b1.sentences.size()], b1.lang, item);
      if (s == (at + 1) % len && kind != 0)
        text.sentence_with_word(line, b2.words[rng() % b2.words.size()], 1 + rng() % 2, b2.lang, item);
      else
        text.sentence(line);
    }
    item.text = text.text();
    std::sort(item.char_truth.begin(), item.char_truth.end());
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<PlantedIntrusion> clean_responses(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  const auto ko = long_korean();
  const auto en = lines_of(source_path("resources/lid/en.txt"));
  static const std::vector<std::string> kHanLines{
      "이 단어는 한자로 學校라고 쓰며 배우는 곳이라는 뜻입니다.",
      "신문 제목에는 가끔 韓國이나 中國 같은 한자가 그대로 쓰입니다.",
      "할아버지 댁 현관에는 家和萬事成이라는 글귀가 걸려 있습니다."};
  std::vector<PlantedIntrusion> out;
  for (std::size_t i = 0; i < n; ++i) {
    PlantedIntrusion item;
    const bool english = i % 5 == 4;
    item.expected = english ? kEnglish : kKorean;
    const auto& base = english ? en : ko;
    Builder text;
    const std::size_t len = 3 + rng() % 3;
    for (std::size_t s = 0; s < len; ++s) text.sentence(base[rng() % base.size()]);
    if (!english && i % 2 == 0) text.sentence(kHanLines[i % kHanLines.size()]);
    item.text = text.text();
    out.push_back(std::move(item));
  }
  return out;
}

std::string write_prompts(const TempDir& dir, const std::vector<PromptRecord>& rows, const std::string& name) {
  std::vector<Json> js;
  for (const auto& p : rows) js.push_back(to_json(p));
  const auto path = dir.file(name);
  jsonl::write(path, js);
  return path;
}

std::map<std::string, std::string> tree_digest(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = file_digest(e.path().string());
  return out;
}

}  // namespace ola::test
