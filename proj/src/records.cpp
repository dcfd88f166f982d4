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

#include "ola/records.hpp"

#include "ola/errors.hpp"

namespace ola {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::pair<E, std::string_view> (&table)[N],
             std::string_view what) {
  for (const auto& [v, name] : table) {
    if (name == s) return v;
  }
  throw ValidationError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

template <typename E, std::size_t N>
std::string_view enum_name(E v, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [e, name] : table) {
    if (e == v) return name;
  }
  return "?";
}

constexpr std::pair<Setting, std::string_view> kSettings[] = {{Setting::Simple, "Simple"},
                                                               {Setting::Complex, "Complex"}};
constexpr std::pair<Category, std::string_view> kCategories[] = {
    {Category::InstructionLanguage, "InstructionLanguage"},
    {Category::ContentLanguage, "ContentLanguage"}};
constexpr std::pair<Position, std::string_view> kPositions[] = {
    {Position::InstrFirst, "InstrFirst"}, {Position::ContentFirst, "ContentFirst"}};
constexpr std::pair<Condition, std::string_view> kConditions[] = {
    {Condition::Baseline, "Baseline"},       {Condition::Oracle, "Oracle"},
    {Condition::CoT, "CoT"},                 {Condition::ZeroShotSys, "ZeroShotSys"},
    {Condition::FewShotSys, "FewShotSys"}};

std::optional<Language> opt_lang(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return Language(j.at(key).get<std::string>());
}

void put_lang(Json& j, const char* key, const std::optional<Language>& l) {
  if (l) j[key] = l->code();
}

}  // namespace

std::string_view to_string(Setting v) noexcept { return enum_name(v, kSettings); }
std::string_view to_string(Category v) noexcept { return enum_name(v, kCategories); }
std::string_view to_string(Position v) noexcept { return enum_name(v, kPositions); }
std::string_view to_string(Condition v) noexcept { return enum_name(v, kConditions); }
Setting parse_setting(std::string_view s) { return parse_enum(s, kSettings, "setting"); }
Category parse_category(std::string_view s) { return parse_enum(s, kCategories, "category"); }
Position parse_position(std::string_view s) { return parse_enum(s, kPositions, "position"); }
Condition parse_condition(std::string_view s) { return parse_enum(s, kConditions, "condition"); }

ExpectedLanguage ExpectedLanguage::parse(std::string_view s) {
  if (s == "Either" || s == "either") return either();
  return ExpectedLanguage(Language(s));
}

bool ExpectedLanguage::accepts(const std::optional<Language>& primary) const noexcept {
  if (!primary) return false;
  return is_either() || *lang_ == *primary;
}

void PromptRecord::validate() const {
  if (id.empty()) throw ValidationError("prompt id is empty");
  if (setting == Setting::Simple) {
    if (!matrix_lang || !embedded_lang)
      throw ValidationError(id + ": Simple prompts need matrix_lang and embedded_lang");
    if (*matrix_lang == *embedded_lang)
      throw ValidationError(id + ": matrix and embedded languages must differ");
  } else {
    if (!instruction_lang || !content_lang)
      throw ValidationError(id + ": Complex prompts need instruction_lang and content_lang");
    if (*instruction_lang == *content_lang)
      throw ValidationError(id + ": instruction and content languages must differ");
    if (!category) throw ValidationError(id + ": Complex prompts need a category");
    const Language want =
        *category == Category::InstructionLanguage ? *instruction_lang : *content_lang;
    if (expected_lang != ExpectedLanguage(want))
      throw ValidationError(id + ": expected_lang inconsistent with category");
  }
}

std::optional<Language> PromptRecord::frame_language() const {
  return setting == Setting::Simple ? matrix_lang : instruction_lang;
}

std::string PromptRecord::config_label() const {
  if (setting == Setting::Simple && matrix_lang && embedded_lang) {
    return language_tag(*matrix_lang) + " Matrix--" + language_tag(*embedded_lang) + " Embed";
  }
  if (setting == Setting::Complex && instruction_lang && content_lang) {
    return language_tag(*instruction_lang) + " Inst--" + language_tag(*content_lang) + " Content";
  }
  return std::string(to_string(setting));
}

void ResponseRecord::validate() const {
  if (thought && condition != Condition::CoT)
    throw ValidationError(response_id() + ": thought is only allowed under CoT");
}

std::string ResponseRecord::response_id() const {
  return prompt_id + "|" + model_id + "|" + std::string(to_string(condition)) + "|" +
         std::to_string(sample_index);
}

Json to_json(const PromptRecord& p) {
  Json j{{"id", p.id},
         {"setting", to_string(p.setting)},
         {"text", p.text},
         {"expected_lang", p.expected_lang.str()},
         {"source", p.source}};
  put_lang(j, "matrix_lang", p.matrix_lang);
  put_lang(j, "embedded_lang", p.embedded_lang);
  put_lang(j, "instruction_lang", p.instruction_lang);
  put_lang(j, "content_lang", p.content_lang);
  if (p.category) j["category"] = to_string(*p.category);
  if (p.position) j["position"] = to_string(*p.position);
  if (p.template_id) j["template_id"] = *p.template_id;
  if (p.content_index) j["content_index"] = *p.content_index;
  if (p.cs_level) j["cs_level"] = *p.cs_level;
  return j;
}

PromptRecord prompt_from_json(const Json& j) {
  try {
    PromptRecord p;
    p.id = j.at("id").get<std::string>();
    p.setting = parse_setting(j.at("setting").get<std::string>());
    p.text = j.at("text").get<std::string>();
    p.matrix_lang = opt_lang(j, "matrix_lang");
    p.embedded_lang = opt_lang(j, "embedded_lang");
    p.instruction_lang = opt_lang(j, "instruction_lang");
    p.content_lang = opt_lang(j, "content_lang");
    p.expected_lang = ExpectedLanguage::parse(j.at("expected_lang").get<std::string>());
    if (j.contains("category") && !j["category"].is_null())
      p.category = parse_category(j["category"].get<std::string>());
    if (j.contains("position") && !j["position"].is_null())
      p.position = parse_position(j["position"].get<std::string>());
    if (j.contains("template_id") && !j["template_id"].is_null())
      p.template_id = j["template_id"].get<std::string>();
    if (j.contains("content_index") && !j["content_index"].is_null())
      p.content_index = j["content_index"].get<std::size_t>();
    if (j.contains("cs_level") && !j["cs_level"].is_null()) p.cs_level = j["cs_level"].get<int>();
    p.source = j.value("source", "");
    return p;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("prompt record: ") + e.what());
  }
}

Json to_json(const ResponseRecord& r) {
  Json j{{"prompt_id", r.prompt_id},
         {"model_id", r.model_id},
         {"condition", to_string(r.condition)},
         {"sample_index", r.sample_index},
         {"text", r.text},
         {"params", r.params}};
  if (r.thought) j["thought"] = *r.thought;
  return j;
}

ResponseRecord response_from_json(const Json& j) {
  try {
    ResponseRecord r;
    r.prompt_id = j.at("prompt_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    r.condition = parse_condition(j.at("condition").get<std::string>());
    r.sample_index = j.value("sample_index", std::size_t{0});
    r.text = j.at("text").get<std::string>();
    if (j.contains("thought") && !j["thought"].is_null()) r.thought = j["thought"].get<std::string>();
    r.params = j.value("params", Json::object());
    return r;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("response record: ") + e.what());
  }
}

}  // namespace ola
