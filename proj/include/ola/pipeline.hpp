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

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ola/dataset.hpp"
#include "ola/evaluation.hpp"
#include "ola/lid.hpp"
#include "ola/llm.hpp"
#include "ola/prompts.hpp"
#include "ola/records.hpp"
#include "ola/report.hpp"
#include "ola/taxonomy.hpp"

namespace ola {

inline constexpr const char* kToolVersion = "0.1.0";

struct LidSettings {
  std::string model_path;   ///< saved n-gram model
  std::string corpus_dir;   ///< or: train from <lang>.txt files at load
  std::string labels_path;  ///< precomputed sentence labels (external backend)
  LidConfig config;
};

/// Run configuration, read from JSON. Relative paths resolve against the
/// directory of the config file.
struct RunConfig {
  std::string base_dir = ".";
  std::string prompts_path;
  std::string parallel_pairs_path;
  std::string templates_path;
  std::string queries_path;
  std::vector<EndpointConfig> models;
  std::optional<EndpointConfig> generator;
  std::optional<EndpointConfig> judge;
  std::vector<Condition> conditions{Condition::Baseline};
  std::size_t samples = 1;
  std::vector<int> cs_levels{30};
  LidSettings lid;
  std::set<Language> exclusions = default_exclusions();
  ValidationBounds bounds;
  int bins = 10;
  std::pair<Language, Language> cue_languages{kEnglish, kKorean};
  std::string prompt_dir;
  std::string out_dir = "out";
  std::string cache_path;  ///< defaults to <out_dir>/cache.jsonl
  bool offline = false;
  Json raw = Json::object();

  /// Throws ConfigError.
  static RunConfig load(const std::string& path);
  static RunConfig from_json(const Json& j, const std::string& base_dir);
  void validate() const;
  std::string resolve(const std::string& path) const;
  std::string out(const std::string& name) const;
  /// Digest of the canonical config JSON.
  std::string digest() const;
};

enum class Stage { Synth, Collect, Score, Analyze, Report, All };
Stage parse_stage(std::string_view s);
std::string_view to_string(Stage s) noexcept;

struct StageReport {
  Stage stage = Stage::All;
  std::vector<std::string> artifacts;
  std::vector<std::string> failures;

  int exit_code() const noexcept { return failures.empty() ? 0 : 1; }
};

/// One scored response as stored in verdicts.jsonl.
struct VerdictRecord {
  EvalResult result;
  std::optional<FailurePattern> pattern;
  IntrusionReport intrusions;
  std::optional<std::string> decided_lang;  ///< language code or "Others"
  std::optional<std::string> error;
};

Json to_json(const VerdictRecord& v);
VerdictRecord verdict_from_json(const Json& j);

using ProviderFactory = std::function<std::shared_ptr<ChatProvider>(const EndpointConfig&)>;

/// Report bundle computed from verdicts and their prompts.
ReportBundle analyze_verdicts(const std::vector<VerdictRecord>& verdicts,
                              const std::vector<PromptRecord>& prompts, const RunConfig& config,
                              std::vector<std::string>* failures = nullptr);

class Pipeline {
 public:
  explicit Pipeline(RunConfig config, ProviderFactory factory = {});

  /// Runs one stage, or every stage in order for Stage::All (stopping at
  /// the first stage that fails).
  std::vector<StageReport> run(Stage stage);

  StageReport synth();
  StageReport collect();
  StageReport score();
  StageReport analyze();
  StageReport report();

  const RunConfig& config() const noexcept { return config_; }
  /// Built on first use from the lid settings.
  const LidBackend& backend();
  std::vector<PromptRecord> load_prompts() const;

 private:
  std::unique_ptr<LlmClient> client_for(const EndpointConfig& endpoint);
  std::string prompts_file() const;

  RunConfig config_;
  ProviderFactory factory_;
  PromptCatalog catalog_;
  std::shared_ptr<ResponseCache> cache_;
  std::shared_ptr<const LidBackend> backend_;
};

/// Backend described by `settings`; a missing model leaves only the
/// script shortcuts.
std::shared_ptr<const LidBackend> make_backend(const LidSettings& settings);

}  // namespace ola
