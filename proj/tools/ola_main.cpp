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

// Command-line front end: `ola <command> [subcommand] [options]`.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ola/annotation_service.hpp"
#include "ola/errors.hpp"
#include "ola/jsonl.hpp"
#include "ola/mock.hpp"
#include "ola/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ola;

namespace {

struct Globals {
  std::string config_path;
  std::string out_dir;
  bool offline = false;
  bool verbose = false;
};

RunConfig load_config(const Globals& g) {
  if (g.config_path.empty()) throw ConfigError("--config is required for this command");
  auto cfg = RunConfig::load(g.config_path);
  if (!g.out_dir.empty()) cfg.out_dir = fs::absolute(g.out_dir).string();
  if (g.offline) cfg.offline = true;
  return cfg;
}

int finish(const std::vector<StageReport>& reports) {
  int code = 0;
  for (const auto& r : reports) {
    for (const auto& a : r.artifacts) std::cout << to_string(r.stage) << ": wrote " << a << "\n";
    for (const auto& f : r.failures) std::cerr << to_string(r.stage) << ": FAILED " << f << "\n";
    if (!r.failures.empty())
      std::cerr << to_string(r.stage) << ": " << r.failures.size() << " failure(s)\n";
    code = std::max(code, r.exit_code());
  }
  return code;
}

int run_stage(const Globals& g, Stage stage) {
  Pipeline p(load_config(g));
  return finish(p.run(stage));
}

Json section_json(const Json& bundle, const std::vector<std::string>& keys) {
  Json out = Json::object();
  for (const auto& k : keys)
    if (bundle.contains(k)) out[k] = bundle[k];
  return out;
}

int analyze_cmd(const Globals& g, const std::vector<std::string>& sections) {
  Pipeline p(load_config(g));
  const auto rep = p.analyze();
  const int code = finish({rep});
  const auto bundle = Json::parse(read_file(p.config().out("analysis.json")));
  std::cout << section_json(bundle, sections).dump(2) << "\n";
  return code;
}

std::set<std::string> parse_sections(const std::string& csv) {
  if (csv.empty()) return all_report_sections();
  std::set<std::string> out;
  std::stringstream ss(csv);
  for (std::string s; std::getline(ss, s, ',');) {
    if (!all_report_sections().contains(s)) throw ConfigError("unknown report section '" + s + "'");
    out.insert(s);
  }
  return out;
}

int report_cmd(const Globals& g, const std::string& sections) {
  const auto cfg = load_config(g);
  const auto path = cfg.out("analysis.json");
  if (!fs::exists(path)) throw StageDependencyMissing("report needs " + path + "; run analyze first");
  const auto files = emit_report(bundle_from_json(Json::parse(read_file(path))), cfg.out("report"),
                                 parse_sections(sections));
  for (const auto& f : files) std::cout << "report: wrote " << f << "\n";
  return 0;
}

int synth_cmd(const Globals& g, bool simple) {
  auto cfg = load_config(g);
  (simple ? cfg.templates_path : cfg.parallel_pairs_path).clear();
  if ((simple ? cfg.parallel_pairs_path : cfg.templates_path).empty())
    throw ConfigError(simple ? "synth simple needs 'parallel_pairs'" : "synth complex needs 'templates'");
  Pipeline p(std::move(cfg));
  return finish({p.synth()});
}

int prefs_cmd(const Globals& g, std::size_t samples, bool no_forced, const std::string& model_id) {
  auto cfg = load_config(g);
  if (cfg.models.empty()) throw ConfigError("prefs build needs a model endpoint");
  auto endpoint = cfg.models.front();
  if (!model_id.empty()) {
    const auto it = std::find_if(cfg.models.begin(), cfg.models.end(),
                                 [&](const EndpointConfig& e) { return e.model_id == model_id; });
    if (it == cfg.models.end()) throw ConfigError("no model '" + model_id + "' in config");
    endpoint = *it;
  }
  const auto catalog = cfg.prompt_dir.empty() ? PromptCatalog::builtin()
                                              : PromptCatalog::with_overrides(cfg.resolve(cfg.prompt_dir));
  Pipeline p(cfg);
  std::vector<PromptRecord> simple;
  for (auto& r : p.load_prompts())
    if (r.setting == Setting::Simple) simple.push_back(std::move(r));
  const auto cache = std::make_shared<ResponseCache>(cfg.cache_path.empty() ? cfg.out("cache.jsonl")
                                                                            : cfg.resolve(cfg.cache_path));
  LlmClient llm(endpoint, make_provider(endpoint, catalog), cache, cfg.offline);
  const auto build = build_preference_pairs(simple, llm, p.backend(), catalog,
                                            {.samples = samples, .forced_fallback = !no_forced});
  std::vector<Json> rows, skipped;
  for (const auto& pair : build.pairs) rows.push_back(to_json(pair));
  for (const auto& [id, why] : build.skipped) skipped.push_back({{"prompt_id", id}, {"reason", why}});
  jsonl::write(cfg.out("pairs.jsonl"), rows);
  jsonl::write(cfg.out("pairs_skipped.jsonl"), skipped);
  std::cout << "prefs: " << rows.size() << " pair(s), " << skipped.size() << " skipped -> "
            << cfg.out("pairs.jsonl") << "\n";
  return 0;
}

std::vector<PromptRecord> read_prompts(const std::string& path) {
  std::vector<PromptRecord> out;
  for (const auto& j : jsonl::read(path)) out.push_back(prompt_from_json(j));
  return out;
}

int aggregate_cmd(const std::string& store, std::size_t min_agree) {
  const auto outcome = aggregate_annotations(read_annotation_store(store), min_agree);
  Json accepted = Json::object();
  for (const auto& [id, e] : outcome.accepted) accepted[id] = e.str();
  const Json out{{"accepted", accepted},
                 {"rejected", outcome.rejected},
                 {"severe", {{"count", outcome.severe.passes}, {"n", outcome.severe.n}, {"percent", outcome.severe.str()}}}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int lid_train(const std::string& corpus, const std::string& model_out) {
  const auto sentences = load_corpus_dir(corpus);
  const auto model = NgramModel::train(sentences);
  model.save_file(model_out);
  std::cout << "lid: trained on " << sentences.size() << " sentence(s), " << model.languages().size()
            << " language(s) -> " << model_out << "\n";
  return 0;
}

int lid_eval(const std::string& model_path, const std::string& corpus, std::size_t min_letters) {
  const auto model = NgramModel::load_file(model_path);
  const LidConfig cfg;
  std::map<std::string, Rate> per_lang;
  Rate total;
  for (const auto& s : load_corpus_dir(corpus)) {
    for (const auto& seg : segment_sentences(s.text)) {
      if (seg.letter_count < min_letters) continue;
      const auto pred = identify_sentence(seg, &model, cfg);
      const bool ok = pred.label == s.language;
      auto& r = per_lang[s.language.code()];
      ++r.n;
      ++total.n;
      r.passes += ok;
      total.passes += ok;
    }
  }
  for (const auto& [lang, r] : per_lang)
    std::cout << lang << "\t" << r.passes << "/" << r.n << "\t" << r.str() << "%\n";
  std::cout << "all\t" << total.passes << "/" << total.n << "\t" << total.str() << "%\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Output-language alignment toolkit for code-switched prompts", "ola"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Globals g;
  app.add_option("--config", g.config_path, "Run configuration (JSON)");
  app.add_option("--out", g.out_dir, "Output directory (overrides out_dir)");
  app.add_flag("--offline", g.offline, "Serve model calls from the cache only");
  app.add_flag("-v,--verbose", g.verbose, "Debug logging");

  std::function<int()> action;

  auto* synth = app.add_subcommand("synth", "Build benchmark prompts")->require_subcommand(1);
  synth->add_subcommand("simple", "Code-switched prompts from parallel pairs")
      ->callback([&] { action = [&] { return synth_cmd(g, true); }; });
  synth->add_subcommand("complex", "Instruction/content prompts from templates")
      ->callback([&] { action = [&] { return synth_cmd(g, false); }; });

  auto* eval = app.add_subcommand("eval", "Collect and score responses")->require_subcommand(1);
  eval->add_subcommand("collect", "Query model endpoints")
      ->callback([&] { action = [&] { return run_stage(g, Stage::Collect); }; });
  eval->add_subcommand("score", "Identify languages and score responses")
      ->callback([&] { action = [&] { return run_stage(g, Stage::Score); }; });

  auto* analyze = app.add_subcommand("analyze", "Aggregate verdicts")->require_subcommand(1);
  analyze->add_subcommand("taxonomy", "Pass rates, failure patterns and intrusions")->callback([&] {
    action = [&] { return analyze_cmd(g, {"pass_rates", "patterns", "intrusions"}); };
  });
  analyze->add_subcommand("cues", "Script ratio, boundary word and position effects")->callback([&] {
    action = [&] { return analyze_cmd(g, {"script_ratio", "boundary", "position"}); };
  });
  analyze->add_subcommand("cot", "Decision/answer consistency")->callback([&] {
    action = [&] { return analyze_cmd(g, {"cot"}); };
  });

  std::size_t pref_samples = 4;
  bool no_forced = false;
  std::string pref_model;
  auto* prefs = app.add_subcommand("prefs", "Preference pairs")->require_subcommand(1);
  auto* prefs_build = prefs->add_subcommand("build", "Build chosen/rejected pairs for Simple prompts");
  prefs_build->add_option("--samples", pref_samples, "Samples per prompt")->check(CLI::PositiveNumber);
  prefs_build->add_flag("--no-forced", no_forced, "Skip prompts without an on-matrix sample");
  prefs_build->add_option("--model", pref_model, "model_id from the config (default: first)");
  prefs_build->callback([&] { action = [&] { return prefs_cmd(g, pref_samples, no_forced, pref_model); }; });

  std::string dataset, store = "annotations.jsonl", host = "127.0.0.1", static_dir;
  int port = 8080;
  std::size_t min_agree = 2;
  auto* annotate = app.add_subcommand("annotate", "Human verification")->require_subcommand(1);
  auto* serve = annotate->add_subcommand("serve", "Run the annotation HTTP service");
  serve->add_option("--dataset", dataset, "prompts.jsonl to annotate")->required()->check(CLI::ExistingFile);
  serve->add_option("--store", store, "Append-only annotation store");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--static", static_dir, "Directory of UI assets served at /");
  serve->callback([&] {
    action = [&] {
      AnnotationService svc(read_prompts(dataset), store);
      svc.serve(host, port, static_dir);
      return 0;
    };
  });
  auto* aggregate = annotate->add_subcommand("aggregate", "Resolve expected languages from the store");
  aggregate->add_option("--store", store)->check(CLI::ExistingFile);
  aggregate->add_option("--min-agree", min_agree)->check(CLI::PositiveNumber);
  aggregate->callback([&] { action = [&] { return aggregate_cmd(store, min_agree); }; });

  std::string sections;
  app.add_subcommand("report", "Write markdown and CSV tables")
      ->callback([&] { action = [&] { return report_cmd(g, sections); }; })
      ->add_option("--sections", sections, "Comma-separated subset of sections");

  std::string stage_name = "all";
  app.add_subcommand("run", "Run pipeline stages")
      ->callback([&] { action = [&] { return run_stage(g, parse_stage(stage_name)); }; })
      ->add_option("--stage", stage_name, "synth, collect, score, analyze, report or all");

  std::string corpus, model_path;
  std::size_t eval_min_letters = 20;
  auto* lid = app.add_subcommand("lid", "Language identifier model")->require_subcommand(1);
  auto* train = lid->add_subcommand("train", "Train an n-gram model from <lang>.txt files");
  train->add_option("--corpus", corpus)->required()->check(CLI::ExistingDirectory);
  train->add_option("--model", model_path, "Output model file")->required();
  train->callback([&] { action = [&] { return lid_train(corpus, model_path); }; });
  auto* leval = lid->add_subcommand("eval", "Sentence accuracy on labelled files");
  leval->add_option("--corpus", corpus)->required()->check(CLI::ExistingDirectory);
  leval->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  leval->add_option("--min-letters", eval_min_letters);
  leval->callback([&] { action = [&] { return lid_eval(model_path, corpus, eval_min_letters); }; });

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("ola"));
  spdlog::set_level(g.verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    return action ? action() : 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const StageDependencyMissing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
