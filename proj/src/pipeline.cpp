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

#include "ola/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <filesystem>
#include <map>
#include <tuple>

#include "ola/cues.hpp"
#include "ola/errors.hpp"
#include "ola/jsonl.hpp"
#include "ola/mock.hpp"

namespace ola {
namespace fs = std::filesystem;
namespace {

const std::set<std::string> kConfigKeys{
    "prompts",     "parallel_pairs", "templates",  "queries",     "models",   "generator",
    "judge",       "conditions",     "samples",    "cs_levels",   "lid",      "exclusions",
    "bounds",      "bins",           "cue_languages", "prompt_dir", "out_dir", "cache",
    "offline"};

LidSource parse_source(std::string_view s) {
  for (auto src : {LidSource::ScriptShortcut, LidSource::NgramModel, LidSource::External})
    if (lid_source_name(src) == s) return src;
  throw FormatError("unknown LID source '" + std::string(s) + "'");
}

std::set<Language> prompt_languages(const PromptRecord& p) {
  std::set<Language> out;
  for (const auto& l : {p.matrix_lang, p.embedded_lang, p.instruction_lang, p.content_lang})
    if (l) out.insert(*l);
  return out;
}

std::map<std::string, PromptRecord> index_prompts(const std::vector<PromptRecord>& prompts) {
  std::map<std::string, PromptRecord> out;
  for (const auto& p : prompts)
    if (!out.emplace(p.id, p).second) throw ValidationError("duplicate prompt id " + p.id);
  return out;
}

std::string file_name(const std::string& path) { return fs::path(path).filename().string(); }

}  // namespace

// ---- config ----

RunConfig RunConfig::load(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  auto cfg = from_json(j, fs::absolute(path).parent_path().string());
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!kConfigKeys.contains(k)) throw ConfigError("unknown config key '" + k + "'");
  RunConfig c;
  c.base_dir = base_dir;
  c.raw = j;
  try {
    c.prompts_path = j.value("prompts", "");
    c.parallel_pairs_path = j.value("parallel_pairs", "");
    c.templates_path = j.value("templates", "");
    c.queries_path = j.value("queries", "");
    for (const auto& m : j.value("models", Json::array())) c.models.push_back(endpoint_from_json(m));
    if (j.contains("generator")) c.generator = endpoint_from_json(j["generator"]);
    if (j.contains("judge")) c.judge = endpoint_from_json(j["judge"]);
    if (j.contains("conditions")) {
      c.conditions.clear();
      for (const auto& s : j["conditions"]) c.conditions.push_back(parse_condition(s.get<std::string>()));
    }
    c.samples = j.value("samples", c.samples);
    if (j.contains("cs_levels")) c.cs_levels = j["cs_levels"].get<std::vector<int>>();
    if (j.contains("lid")) {
      const auto& l = j["lid"];
      c.lid.model_path = l.value("model", "");
      c.lid.corpus_dir = l.value("corpus_dir", "");
      c.lid.labels_path = l.value("labels", "");
      c.lid.config.shortcut_threshold = l.value("shortcut_threshold", c.lid.config.shortcut_threshold);
      c.lid.config.min_vote_letters = l.value("min_vote_letters", c.lid.config.min_vote_letters);
    }
    if (j.contains("exclusions")) {
      c.exclusions.clear();
      for (const auto& s : j["exclusions"]) c.exclusions.insert(Language(s.get<std::string>()));
    }
    if (j.contains("bounds")) {
      c.bounds.min_matrix_ratio = j["bounds"].value("min_matrix_ratio", c.bounds.min_matrix_ratio);
      c.bounds.max_matrix_ratio = j["bounds"].value("max_matrix_ratio", c.bounds.max_matrix_ratio);
    }
    c.bins = j.value("bins", c.bins);
    if (j.contains("cue_languages")) {
      const auto v = j["cue_languages"].get<std::vector<std::string>>();
      if (v.size() != 2) throw ConfigError("cue_languages needs exactly two languages");
      c.cue_languages = {Language(v[0]), Language(v[1])};
    }
    c.prompt_dir = j.value("prompt_dir", "");
    c.out_dir = j.value("out_dir", c.out_dir);
    c.cache_path = j.value("cache", "");
    c.offline = j.value("offline", false);
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  } catch (const InvalidLanguage& e) {
    throw ConfigError(e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  // Paths inside the lid block resolve like the others.
  for (auto* p : {&c.lid.model_path, &c.lid.corpus_dir, &c.lid.labels_path})
    if (!p->empty()) *p = c.resolve(*p);
  return c;
}

std::string RunConfig::resolve(const std::string& path) const {
  if (path.empty()) return path;
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(base_dir) / p).lexically_normal().string();
}

std::string RunConfig::out(const std::string& name) const {
  return (fs::path(resolve(out_dir)) / name).string();
}

void RunConfig::validate() const {
  auto must_exist = [&](const std::string& key, const std::string& path) {
    if (!path.empty() && !fs::exists(resolve(path)))
      throw ConfigError(key + " not found: " + resolve(path));
  };
  must_exist("prompts", prompts_path);
  must_exist("parallel_pairs", parallel_pairs_path);
  must_exist("templates", templates_path);
  must_exist("queries", queries_path);
  must_exist("prompt_dir", prompt_dir);
  must_exist("lid.model", lid.model_path);
  must_exist("lid.corpus_dir", lid.corpus_dir);
  must_exist("lid.labels", lid.labels_path);
  if (!prompts_path.empty() && (!parallel_pairs_path.empty() || !templates_path.empty()))
    throw ConfigError("set either prompts or synthesis inputs, not both");
  if (samples == 0) throw ConfigError("samples must be at least 1");
  if (bins < 2) throw ConfigError("bins must be at least 2");
  if (conditions.empty()) throw ConfigError("conditions is empty");
  std::set<std::string> ids;
  for (const auto& m : models)
    if (!ids.insert(m.model_id).second) throw ConfigError("duplicate model_id " + m.model_id);
}

std::string RunConfig::digest() const { return sha256_hex(raw.dump()); }

Stage parse_stage(std::string_view s) {
  for (auto st : {Stage::Synth, Stage::Collect, Stage::Score, Stage::Analyze, Stage::Report, Stage::All})
    if (to_string(st) == s) return st;
  throw ConfigError("unknown stage '" + std::string(s) + "'");
}

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Synth: return "synth";
    case Stage::Collect: return "collect";
    case Stage::Score: return "score";
    case Stage::Analyze: return "analyze";
    case Stage::Report: return "report";
    case Stage::All: return "all";
  }
  return "";
}

// ---- verdict records ----

Json to_json(const VerdictRecord& v) {
  const auto& r = v.result;
  Json sentences = Json::array();
  for (const auto& sl : r.verdict.sentence_labels) {
    sentences.push_back({{"index", sl.index},
                         {"text", sl.segment.text},
                         {"start", sl.segment.start_offset},
                         {"end", sl.segment.end_offset},
                         {"letters", sl.segment.letter_count},
                         {"code_block", sl.segment.code_block},
                         {"lang", sl.prediction.label ? Json(sl.prediction.label->code()) : Json(nullptr)},
                         {"confidence", sl.prediction.confidence},
                         {"source", lid_source_name(sl.prediction.source)},
                         {"votes", sl.votes}});
  }
  Json sh = Json::array(), ch = Json::array();
  for (const auto& h : v.intrusions.sentence_hits) sh.push_back({{"segment_index", h.segment_index}, {"lang", h.language.code()}});
  for (const auto& h : v.intrusions.char_hits)
    ch.push_back({{"start", h.start}, {"end", h.end}, {"script", script_name(h.script)},
                  {"lang", h.mapped.code()}, {"text", h.text}, {"snippet", h.snippet}});
  Json excl = Json::array();
  for (const auto& l : v.intrusions.exclusion_set) excl.push_back(l.code());
  Json j{{"prompt_id", r.prompt_id},
         {"model_id", r.model_id},
         {"condition", to_string(r.condition)},
         {"sample_index", r.sample_index},
         {"setting", to_string(r.setting)},
         {"config_label", r.config_label},
         {"expected_lang", r.expected.str()},
         {"primary_lang", r.verdict.primary ? Json(r.verdict.primary->code()) : Json(nullptr)},
         {"pass", r.pass},
         {"scored_span", to_string(r.scored_text_span)},
         {"meta_segments", r.meta_segment_count},
         {"tie_broken", r.verdict.tie_broken},
         {"pattern", v.pattern ? Json(std::string(to_string(*v.pattern))) : Json(nullptr)},
         {"sentences", sentences},
         {"intrusions", {{"sentence_hits", sh}, {"char_hits", ch}, {"exclusions", excl}}},
         {"cot_unparsed", r.cot_unparsed}};
  if (v.decided_lang) j["decided_lang"] = *v.decided_lang;
  if (v.error) j["error"] = *v.error;
  return j;
}

VerdictRecord verdict_from_json(const Json& j) {
  try {
    VerdictRecord v;
    auto& r = v.result;
    r.prompt_id = j.at("prompt_id");
    r.model_id = j.at("model_id");
    r.condition = parse_condition(j.at("condition").get<std::string>());
    r.sample_index = j.at("sample_index");
    r.setting = parse_setting(j.at("setting").get<std::string>());
    r.config_label = j.at("config_label");
    r.expected = ExpectedLanguage::parse(j.at("expected_lang").get<std::string>());
    if (!j.at("primary_lang").is_null()) r.verdict.primary = Language(j["primary_lang"].get<std::string>());
    r.pass = j.at("pass");
    r.scored_text_span = j.at("scored_span") == "Whole" ? ScoredSpan::Whole : ScoredSpan::TaskContentOnly;
    r.meta_segment_count = j.at("meta_segments");
    r.verdict.tie_broken = j.at("tie_broken");
    r.cot_unparsed = j.at("cot_unparsed");
    for (const auto& s : j.at("sentences")) {
      SentenceLabel sl;
      sl.index = s.at("index");
      sl.segment = {s.at("text"), s.at("start"), s.at("end"), s.at("letters"), s.at("code_block")};
      if (!s.at("lang").is_null()) sl.prediction.label = Language(s["lang"].get<std::string>());
      sl.prediction.confidence = s.at("confidence");
      sl.prediction.source = parse_source(s.at("source").get<std::string>());
      sl.votes = s.at("votes");
      if (sl.votes) ++r.verdict.voted_count[*sl.prediction.label];
      r.verdict.sentence_labels.push_back(std::move(sl));
    }
    if (!j.at("pattern").is_null()) v.pattern = parse_failure_pattern(j["pattern"].get<std::string>());
    const auto& in = j.at("intrusions");
    for (const auto& h : in.at("sentence_hits"))
      v.intrusions.sentence_hits.push_back({h.at("segment_index"), Language(h.at("lang").get<std::string>())});
    for (const auto& h : in.at("char_hits")) {
      const auto cls = parse_script_class(h.at("script").get<std::string>());
      if (!cls) throw FormatError("unknown script in verdict");
      v.intrusions.char_hits.push_back({h.at("start"), h.at("end"), *cls, Language(h.at("lang").get<std::string>()),
                                        h.at("text"), h.at("snippet")});
    }
    for (const auto& l : in.at("exclusions")) v.intrusions.exclusion_set.insert(Language(l.get<std::string>()));
    if (j.contains("decided_lang")) v.decided_lang = j["decided_lang"].get<std::string>();
    if (j.contains("error")) v.error = j["error"].get<std::string>();
    return v;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("verdict record: ") + e.what());
  }
}

// ---- analysis ----

ReportBundle analyze_verdicts(const std::vector<VerdictRecord>& verdicts,
                              const std::vector<PromptRecord>& prompts, const RunConfig& config,
                              std::vector<std::string>* failures) {
  const auto by_id = index_prompts(prompts);
  ReportBundle b;

  using RateKey = std::tuple<int, std::string, std::string, int>;
  std::map<RateKey, PassRateRow> rates;
  std::vector<std::pair<std::string, FailurePattern>> patterns;
  std::vector<std::pair<std::string, IntrusionReport>> intrusions;
  std::map<std::string, std::vector<ScoredItem>> simple_items;
  std::vector<ScoredItem> complex_items;
  std::map<std::string, std::vector<CotItem>> cot_items;

  for (const auto& v : verdicts) {
    if (v.error && *v.error == "JudgeUnavailable") continue;
    const auto& r = v.result;
    const auto it = by_id.find(r.prompt_id);
    if (it == by_id.end()) {
      if (failures) failures->push_back("verdict for unknown prompt " + r.prompt_id);
      continue;
    }
    const std::string cond(to_string(r.condition));
    RateKey key{static_cast<int>(r.setting), r.config_label, r.model_id, static_cast<int>(r.condition)};
    auto& row = rates[key];
    row.setting = std::string(to_string(r.setting));
    row.config = r.config_label;
    row.model = r.model_id;
    row.condition = cond;
    ++row.rate.n;
    if (r.pass) ++row.rate.passes;
    row.members.push_back(r.response_id());

    const std::string group = r.model_id + " | " + cond;
    if (v.pattern) patterns.emplace_back(r.config_label + " | " + group, *v.pattern);
    if (!v.error) intrusions.emplace_back(group, v.intrusions);
    if (r.setting == Setting::Simple) simple_items[group].push_back({it->second, r});
    else complex_items.push_back({it->second, r});
    if (r.condition == Condition::CoT && v.decided_lang) {
      std::optional<Language> decided;
      if (*v.decided_lang != "Others") decided = Language(*v.decided_lang);
      cot_items[r.config_label + " | " + r.model_id].push_back({decided, r.verdict});
    }
  }

  for (auto& [k, row] : rates) {
    std::sort(row.members.begin(), row.members.end());
    b.pass_rates.push_back(std::move(row));
  }
  for (auto& [g, d] : pattern_distribution(patterns)) b.patterns.push_back({g, d});
  for (auto& [g, row] : intrusion_summary(intrusions)) b.intrusions.push_back({g, row});

  std::vector<ScriptClass> scripts;
  for (const auto& l : {config.cue_languages.first, config.cue_languages.second})
    if (auto s = language_script(l)) scripts.push_back(*s);
  for (const auto& [group, items] : simple_items) {
    for (auto s : scripts)
      b.script_ratio.push_back({group, script_ratio_effect(items, s, config.bins)});
    for (auto pos : {BoundaryPosition::First, BoundaryPosition::Last}) {
      try {
        b.boundary.push_back({group, boundary_word_effect(items, pos, config.cue_languages)});
      } catch (const EmptyInput& e) {
        spdlog::info("{}: {}", group, e.what());
      }
    }
  }
  if (!complex_items.empty()) {
    try {
      for (auto& [g, q] : position_robustness(pair_by_position(complex_items))) b.position.push_back({g, q});
    } catch (const UnpairedItem& e) {
      if (failures) failures->push_back(e.what());
    }
  }
  for (const auto& [g, items] : cot_items) b.cot.push_back({g, cot_consistency(items)});
  return b;
}

// ---- backend ----

std::shared_ptr<const LidBackend> make_backend(const LidSettings& s) {
  std::shared_ptr<const NgramModel> model;
  if (!s.model_path.empty()) {
    model = std::make_shared<NgramModel>(NgramModel::load_file(s.model_path));
  } else if (!s.corpus_dir.empty()) {
    const auto corpus = load_corpus_dir(s.corpus_dir);
    model = std::make_shared<NgramModel>(NgramModel::train(corpus));
  } else {
    spdlog::warn("no LID model configured; Latin-script sentences will be Undetermined");
  }
  auto builtin = std::make_shared<BuiltinLidBackend>(model, s.config);
  if (s.labels_path.empty()) return builtin;
  return std::make_shared<ExternalLidBackend>(ExternalLidBackend::load_file(s.labels_path, s.config, builtin));
}

// ---- pipeline ----

Pipeline::Pipeline(RunConfig config, ProviderFactory factory)
    : config_(std::move(config)),
      factory_(std::move(factory)),
      catalog_(config_.prompt_dir.empty() ? PromptCatalog::builtin()
                                          : PromptCatalog::with_overrides(config_.resolve(config_.prompt_dir))) {
  if (!factory_) {
    factory_ = [this](const EndpointConfig& e) { return make_provider(e, catalog_); };
  }
  const std::string cache = config_.cache_path.empty() ? config_.out("cache.jsonl") : config_.resolve(config_.cache_path);
  cache_ = std::make_shared<ResponseCache>(cache);
}

const LidBackend& Pipeline::backend() {
  if (!backend_) backend_ = make_backend(config_.lid);
  return *backend_;
}

std::unique_ptr<LlmClient> Pipeline::client_for(const EndpointConfig& endpoint) {
  return std::make_unique<LlmClient>(endpoint, factory_(endpoint), cache_, config_.offline);
}

std::string Pipeline::prompts_file() const {
  return config_.prompts_path.empty() ? config_.out("prompts.jsonl") : config_.resolve(config_.prompts_path);
}

std::vector<PromptRecord> Pipeline::load_prompts() const {
  const auto path = prompts_file();
  if (!fs::exists(path)) throw StageDependencyMissing("no prompts: set 'prompts' or run synth first (" + path + ")");
  std::vector<PromptRecord> out;
  for (const auto& j : jsonl::read(path)) {
    auto p = prompt_from_json(j);
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<StageReport> Pipeline::run(Stage stage) {
  if (stage != Stage::All) {
    switch (stage) {
      case Stage::Synth: return {synth()};
      case Stage::Collect: return {collect()};
      case Stage::Score: return {score()};
      case Stage::Analyze: return {analyze()};
      case Stage::Report: return {report()};
      default: break;
    }
  }
  std::vector<StageReport> out;
  for (auto fn : {&Pipeline::synth, &Pipeline::collect, &Pipeline::score, &Pipeline::analyze, &Pipeline::report}) {
    out.push_back((this->*fn)());
    if (out.back().exit_code() != 0) break;
  }
  return out;
}

StageReport Pipeline::synth() {
  StageReport rep{Stage::Synth, {}, {}};
  if (config_.parallel_pairs_path.empty() && config_.templates_path.empty()) {
    spdlog::info("synth: no synthesis inputs configured, nothing to do");
    return rep;
  }
  std::vector<Json> rows, rejected;
  if (!config_.queries_path.empty()) {
    std::vector<std::string> queries;
    for (const auto& j : jsonl::read(config_.resolve(config_.queries_path)))
      queries.push_back(j.is_string() ? j.get<std::string>() : j.at("text").get<std::string>());
    const auto f = filter_source_queries(queries);
    std::vector<Json> out;
    for (const auto& q : f.kept) out.push_back({{"text", q}, {"kept", true}});
    for (const auto& [q, why] : f.rejected) out.push_back({{"text", q}, {"kept", false}, {"reason", why}});
    jsonl::write(config_.out("filtered_queries.jsonl"), out);
    rep.artifacts.push_back(config_.out("filtered_queries.jsonl"));
  }
  if (!config_.parallel_pairs_path.empty()) {
    const auto endpoint = config_.generator ? *config_.generator
                          : !config_.models.empty() ? config_.models.front()
                                                    : throw ConfigError("synth needs a generator or model endpoint");
    auto llm = client_for(endpoint);
    SynthOptions opts;
    opts.bounds = config_.bounds;
    for (const auto& pair : read_parallel_pairs(config_.resolve(config_.parallel_pairs_path))) {
      for (const auto& matrix : {kEnglish, pair.other_lang}) {
        for (int level : config_.cs_levels) {
          try {
            rows.push_back(to_json(synth_simple(pair, matrix, level, *llm, catalog_, opts)));
          } catch (const GenerationRejected& e) {
            rejected.push_back({{"source_id", pair.source_id}, {"matrix", matrix.code()}, {"level", level}, {"reason", e.what()}});
          } catch (const Error& e) {
            rep.failures.push_back(pair.source_id + ": " + e.what());
          }
        }
      }
    }
  }
  if (!config_.templates_path.empty()) {
    for (const auto& j : jsonl::read(config_.resolve(config_.templates_path))) {
      try {
        for (const auto& p : instantiate_complex(template_from_json(j))) rows.push_back(to_json(p));
      } catch (const Error& e) {
        rep.failures.push_back(e.what());
      }
    }
  }
  jsonl::write(config_.out("prompts.jsonl"), rows);
  rep.artifacts.push_back(config_.out("prompts.jsonl"));
  if (!rejected.empty()) {
    jsonl::write(config_.out("synth_rejected.jsonl"), rejected);
    rep.artifacts.push_back(config_.out("synth_rejected.jsonl"));
  }
  return rep;
}

StageReport Pipeline::collect() {
  StageReport rep{Stage::Collect, {}, {}};
  const auto prompts = load_prompts();
  if (config_.models.empty()) throw ConfigError("collect needs at least one model endpoint");
  std::vector<Json> rows;
  for (const auto& endpoint : config_.models) {
    auto llm = client_for(endpoint);
    struct Slot {
      const PromptRecord* prompt;
      Condition condition;
      std::size_t sample;
    };
    std::vector<Slot> slots;
    std::vector<ChatRequest> requests;
    for (const auto& p : prompts) {
      for (auto cond : config_.conditions) {
        const auto messages = assemble_prompt(p, cond, catalog_);
        for (std::size_t s = 0; s < config_.samples; ++s) {
          slots.push_back({&p, cond, s});
          requests.push_back(llm->make_request(messages, s));
        }
      }
    }
    const auto outcomes = llm->complete_batch(requests);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& slot = slots[i];
      ResponseRecord r;
      r.prompt_id = slot.prompt->id;
      r.model_id = endpoint.model_id;
      r.condition = slot.condition;
      r.sample_index = slot.sample;
      if (!outcomes[i].text) {
        rep.failures.push_back(r.response_id() + ": " + outcomes[i].error);
        continue;
      }
      r.params = {{"temperature", endpoint.params.temperature}, {"top_p", endpoint.params.top_p}};
      r.text = *outcomes[i].text;
      if (slot.condition == Condition::CoT) {
        try {
          const auto cot = parse_cot(r.text);
          r.thought = cot.thought;
          r.text = cot.answer;
        } catch (const CotParseError&) {
          r.params["cot_parse_error"] = true;
        }
      }
      rows.push_back(to_json(r));
    }
  }
  jsonl::write(config_.out("responses.jsonl"), rows);
  rep.artifacts.push_back(config_.out("responses.jsonl"));
  return rep;
}

StageReport Pipeline::score() {
  StageReport rep{Stage::Score, {}, {}};
  const auto responses_path = config_.out("responses.jsonl");
  if (!fs::exists(responses_path)) throw StageDependencyMissing("score needs " + responses_path + "; run collect first");
  const auto by_id = index_prompts(load_prompts());
  std::unique_ptr<LlmClient> judge_client;
  if (config_.judge) judge_client = client_for(*config_.judge);
  const JudgeContext ctx{judge_client.get(), &catalog_};
  const auto& be = backend();

  std::vector<Json> rows;
  for (const auto& j : jsonl::read(responses_path)) {
    const auto resp = response_from_json(j);
    const auto it = by_id.find(resp.prompt_id);
    if (it == by_id.end()) {
      rep.failures.push_back("response for unknown prompt " + resp.prompt_id);
      continue;
    }
    const auto& prompt = it->second;
    VerdictRecord v;
    try {
      v.result = judge(prompt, resp, be, ctx);
    } catch (const EmptyResponse&) {
      v.error = "EmptyResponse";
    } catch (const JudgeUnavailable&) {
      v.error = "JudgeUnavailable";
    }
    if (v.error) {
      auto& r = v.result;
      r.prompt_id = prompt.id;
      r.model_id = resp.model_id;
      r.condition = resp.condition;
      r.sample_index = resp.sample_index;
      r.setting = prompt.setting;
      r.config_label = prompt.config_label();
      r.expected = prompt.expected_lang;
      r.pass = false;
    } else {
      const auto& r = v.result;
      const Language expected = r.expected.language().value_or(*prompt.frame_language());
      if (r.verdict.determined() && r.expected.language()) v.pattern = classify_pattern(r.verdict, expected);
      v.intrusions = detect_intrusions(resp.text, expected, prompt_languages(prompt), config_.exclusions, be,
                                       resp.response_id());
    }
    if (resp.thought) {
      const auto d = classify_decision(*resp.thought, judge_client.get(), &catalog_);
      v.decided_lang = d.language ? d.language->code() : "Others";
    }
    rows.push_back(to_json(v));
  }
  jsonl::write(config_.out("verdicts.jsonl"), rows);
  rep.artifacts.push_back(config_.out("verdicts.jsonl"));
  return rep;
}

StageReport Pipeline::analyze() {
  StageReport rep{Stage::Analyze, {}, {}};
  const auto verdicts_path = config_.out("verdicts.jsonl");
  if (!fs::exists(verdicts_path)) throw StageDependencyMissing("analyze needs " + verdicts_path + "; run score first");
  std::vector<VerdictRecord> verdicts;
  for (const auto& j : jsonl::read(verdicts_path)) verdicts.push_back(verdict_from_json(j));
  auto bundle = analyze_verdicts(verdicts, load_prompts(), config_, &rep.failures);

  Json inputs = Json::object();
  inputs[file_name(prompts_file())] = file_digest(prompts_file());
  for (const auto& name : {"responses.jsonl", "verdicts.jsonl"})
    if (fs::exists(config_.out(name))) inputs[name] = file_digest(config_.out(name));
  bundle.manifest = {{"tool_version", kToolVersion}, {"config_digest", config_.digest()}, {"inputs", inputs}};
  const auto path = config_.out("analysis.json");
  write_file(path, to_json(bundle).dump(2) + "\n");
  rep.artifacts.push_back(path);
  return rep;
}

StageReport Pipeline::report() {
  StageReport rep{Stage::Report, {}, {}};
  const auto path = config_.out("analysis.json");
  if (!fs::exists(path)) throw StageDependencyMissing("report needs " + path + "; run analyze first");
  const auto bundle = bundle_from_json(Json::parse(read_file(path)));
  rep.artifacts = emit_report(bundle, config_.out("report"));
  return rep;
}

}  // namespace ola
