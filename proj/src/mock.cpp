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

#include "ola/mock.hpp"

#include <map>
#include <regex>
#include <thread>
#include <vector>

#include "ola/errors.hpp"
#include "ola/script.hpp"
#include "ola/segment.hpp"
#include "ola/utf8.hpp"

namespace ola {
namespace {

const std::map<std::string, std::vector<std::string>>& sentence_bank() {
  static const std::map<std::string, std::vector<std::string>> kBank{
      {"en",
       {"Regular exercise improves both physical strength and mental focus.",
        "Most experts recommend starting with a light warm-up before lifting heavy weights.",
        "The library opens early on weekdays and stays open late on Fridays.",
        "Rivers carry nutrients from the mountains down to the coastal plains.",
        "A balanced breakfast helps students concentrate during morning classes.",
        "Good documentation saves new team members a lot of onboarding time.",
        "The museum added a new gallery dedicated to early printing presses.",
        "Planting trees along city streets lowers summer temperatures noticeably."}},
      {"ko",
       {"규칙적인 운동은 체력과 집중력을 모두 향상시킵니다.",
        "대부분의 전문가는 무거운 운동 전에 가벼운 준비 운동을 권장합니다.",
        "도서관은 평일에 일찍 문을 열고 금요일에는 늦게까지 운영합니다.",
        "강물은 산에서 해안 평야까지 영양분을 실어 나릅니다.",
        "균형 잡힌 아침 식사는 학생들이 오전 수업에 집중하도록 돕습니다.",
        "좋은 문서는 새로운 팀원의 적응 시간을 크게 줄여 줍니다.",
        "박물관은 초기 인쇄기를 위한 새로운 전시관을 열었습니다.",
        "도시 거리에 나무를 심으면 여름철 기온이 눈에 띄게 낮아집니다."}},
      {"zh",
       {"定期锻炼可以提高体力和注意力。",
        "大多数专家建议在举重之前先做轻度热身运动。",
        "图书馆工作日很早开门，星期五开到很晚。",
        "河流把营养物质从山区带到沿海平原。",
        "均衡的早餐有助于学生在上午上课时集中精神。",
        "良好的文档可以为新成员节省大量时间。"}},
      {"ja",
       {"まいにち すこし あるく ことが たいせつです。",
        "あさごはんを たべると しゅうちゅうしやすく なります。",
        "としょかんは へいじつ はやく あいています。",
        "かわは やまから うみへ ながれて いきます。",
        "あたらしい ことを まなぶのは たのしいです。"}},
      {"ru",
       {"Регулярные упражнения улучшают силу и внимание.",
        "Библиотека открывается рано по будним дням.",
        "Реки несут питательные вещества с гор к побережью.",
        "Хороший завтрак помогает студентам сосредоточиться."}},
      {"id",
       {"Olahraga teratur meningkatkan kekuatan fisik dan fokus mental.",
        "Perpustakaan buka lebih awal pada hari kerja.",
        "Sungai membawa nutrisi dari pegunungan ke dataran pantai.",
        "Sarapan yang seimbang membantu siswa berkonsentrasi di kelas."}},
      {"th",
       {"การออกกำลังกายเป็นประจำช่วยให้ร่างกายแข็งแรง",
        "ห้องสมุดเปิดเช้าในวันธรรมดา",
        "แม่น้ำพาสารอาหารจากภูเขาลงสู่ชายฝั่ง"}},
      {"hi",
       {"नियमित व्यायाम से शरीर और मन दोनों मजबूत होते हैं।",
        "पुस्तकालय सप्ताह के दिनों में जल्दी खुलता है।",
        "नदियाँ पहाड़ों से मैदानों तक पोषक तत्व ले जाती हैं।"}},
  };
  return kBank;
}

std::size_t fnv1a(std::string_view s) {
  std::size_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// Code-switched rewrite of a synthesis request: the middle word of the
// matrix text becomes the first word of the translation.
std::optional<std::string> synth_reply(std::string_view prompt) {
  const auto task = prompt.find("[BEGIN TASK]");
  if (task == std::string_view::npos) return std::nullopt;
  static const std::regex kLine(R"(<(English|Korean)>([^\n]*))");
  const std::string body(prompt.substr(task));
  std::vector<std::string> texts;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), kLine); it != std::sregex_iterator(); ++it)
    texts.push_back((*it)[2].str());
  if (texts.size() < 2) return std::nullopt;
  static const std::regex kLevel(R"(Replace about (\d+) percent)");
  std::smatch m;
  const std::string p(prompt);
  if (std::regex_search(p, m, kLevel) && std::stoi(m[1].str()) == 0) return texts[0];

  auto words = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ' ') {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
  };
  auto letters_only = [](const std::string& w) {
    std::string out;
    for (char32_t c : utf8::decode(w))
      if (is_letter(classify_char(c))) utf8::append(out, c);
    return out;
  };
  auto matrix = words(texts[0]);
  const auto embedded = words(texts[1]);
  std::string insert;
  for (const auto& w : embedded)
    if (!(insert = letters_only(w)).empty()) break;
  if (matrix.empty() || insert.empty()) return texts[0];
  auto& target = matrix[matrix.size() / 2];
  const auto cps = utf8::decode(target);
  std::size_t b = 0, e = cps.size();
  while (b < e && !is_letter(classify_char(cps[b]))) ++b;
  while (e > b && !is_letter(classify_char(cps[e - 1]))) --e;
  const std::u32string_view view(cps);
  target = utf8::encode(view.substr(0, b)) + insert + utf8::encode(view.substr(e));
  std::string out;
  for (std::size_t i = 0; i < matrix.size(); ++i) out += (i ? " " : "") + matrix[i];
  return out;
}

}  // namespace

std::string canned_text(const Language& lang, std::size_t seed, std::size_t sentences) {
  const auto& bank = sentence_bank();
  const auto it = bank.find(lang.code());
  if (it == bank.end()) throw ConfigError("no canned sentences for " + lang.code());
  const auto& pool = it->second;
  std::string out;
  for (std::size_t i = 0; i < sentences; ++i) {
    if (i) out += ' ';
    out += pool[(seed + i) % pool.size()];
  }
  return out;
}

LanguagePolicy final_word_policy(Language fallback) {
  return [fallback](std::string_view text, std::size_t) {
    return boundary_token_language(text, BoundaryPosition::Last).value_or(fallback);
  };
}

LanguagePolicy majority_script_policy(Language fallback) {
  return [fallback](std::string_view text, std::size_t) {
    const auto p = script_profile(text);
    const auto cls = p.dominant_letter_class();
    if (!cls) return fallback;
    if (*cls == ScriptClass::Latin) return kEnglish;
    return script_language(*cls).value_or(fallback);
  };
}

LanguagePolicy fixed_policy(Language lang) {
  return [lang](std::string_view, std::size_t) { return lang; };
}

LanguagePolicy alternating_policy(Language first, Language second) {
  return [first, second](std::string_view, std::size_t s) { return s % 2 == 0 ? first : second; };
}

MockChatProvider::MockChatProvider(LanguagePolicy policy, PromptCatalog catalog, MockOptions options)
    : policy_(std::move(policy)), catalog_(std::move(catalog)), options_(options) {}

ProviderReply MockChatProvider::send(const ChatRequest& request, const EndpointConfig&) {
  ++calls_;
  const auto now = ++in_flight_;
  struct Leave {
    std::atomic<std::size_t>& n;
    ~Leave() { --n; }
  } leave{in_flight_};
  for (auto peak = peak_.load(); now > peak && !peak_.compare_exchange_weak(peak, now);) {
  }
  if (options_.delay.count() > 0) std::this_thread::sleep_for(options_.delay);

  std::string user;
  for (const auto& m : request.messages)
    if (m.role == "user") user = m.content;

  ProviderReply reply{200, "", "stop", ""};
  if (auto synth = synth_reply(user)) {
    reply.text = *synth;
    return reply;
  }

  std::string_view text = user;
  bool cot = false;
  for (const char* code : {"en", "ko"}) {
    const auto& instr = catalog_.cot_instruction(Language(code));
    if (text.ends_with(instr)) {
      text = trim(text.substr(0, text.size() - instr.size()));
      cot = true;
      break;
    }
  }
  std::optional<Language> lang;
  if (options_.obey_directives) {
    const auto segs = segment_sentences(text);
    if (!segs.empty()) lang = catalog_.directive_language(segs.back().text);
  }
  if (!lang) lang = policy_(text, request.sample_index);
  const std::size_t seed = fnv1a(text) + request.sample_index;
  const auto body = canned_text(*lang, seed, options_.sentences);
  if (cot) {
    reply.text = "```json\n" +
                 Json{{"thought", "I will respond in " + language_name(*lang) +
                                      " because it fits the request."},
                      {"answer", body}}
                     .dump(2) +
                 "\n```";
  } else {
    reply.text = body;
  }
  return reply;
}

std::shared_ptr<ChatProvider> make_provider(const EndpointConfig& endpoint,
                                            const PromptCatalog& catalog) {
  const std::string& url = endpoint.base_url;
  if (!url.starts_with("mock://")) return std::make_shared<HttpChatProvider>();
  const std::string name = url.substr(7);
  LanguagePolicy policy;
  if (name == "final-word") policy = final_word_policy();
  else if (name == "majority-script") policy = majority_script_policy();
  else if (name.starts_with("fixed-")) policy = fixed_policy(Language(name.substr(6)));
  else if (name.starts_with("alternate-") && name.size() == 15)
    policy = alternating_policy(Language(name.substr(10, 2)), Language(name.substr(13, 2)));
  else throw ConfigError("unknown mock endpoint '" + url + "'");
  return std::make_shared<MockChatProvider>(std::move(policy), catalog);
}

}  // namespace ola
