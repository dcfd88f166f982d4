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

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "ola/language.hpp"
#include "ola/llm.hpp"
#include "ola/prompts.hpp"

namespace ola {

/// Deterministic multi-sentence text in `lang`; `seed` picks the sentences.
std::string canned_text(const Language& lang, std::size_t seed, std::size_t sentences = 3);

/// Chooses the reply language from the user text and sample index.
using LanguagePolicy = std::function<Language(std::string_view user_text, std::size_t sample_index)>;

/// Language of the last word; Latin counts as English.
LanguagePolicy final_word_policy(Language fallback = kEnglish);
/// Language of the script with the most letters.
LanguagePolicy majority_script_policy(Language fallback = kEnglish);
LanguagePolicy fixed_policy(Language lang);
/// `first` for even sample indices, `second` for odd ones.
LanguagePolicy alternating_policy(Language first, Language second);

struct MockOptions {
  /// Answer in the language named by a trailing oracle directive.
  bool obey_directives = true;
  std::size_t sentences = 3;
  /// Simulated latency per call, for concurrency tests.
  std::chrono::milliseconds delay{0};
};

/// Offline chat provider driven by a language policy. Replies to CoT
/// prompts as {"thought", "answer"} JSON and to synthesis prompts with a
/// one-noun code-switched rewrite.
class MockChatProvider final : public ChatProvider {
 public:
  MockChatProvider(LanguagePolicy policy, PromptCatalog catalog = PromptCatalog::builtin(),
                   MockOptions options = {});

  ProviderReply send(const ChatRequest& request, const EndpointConfig& endpoint) override;

  std::size_t calls() const noexcept { return calls_.load(); }
  std::size_t peak_in_flight() const noexcept { return peak_.load(); }

 private:
  LanguagePolicy policy_;
  PromptCatalog catalog_;
  MockOptions options_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> peak_{0};
};

/// Provider that delegates to a function; handy for scripted failures.
class ScriptedProvider final : public ChatProvider {
 public:
  using Fn = std::function<ProviderReply(const ChatRequest&)>;
  explicit ScriptedProvider(Fn fn) : fn_(std::move(fn)) {}
  ProviderReply send(const ChatRequest& request, const EndpointConfig&) override {
    ++calls_;
    return fn_(request);
  }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  Fn fn_;
  std::atomic<std::size_t> calls_{0};
};

/// HTTP provider for http(s) URLs; "mock://<policy>" URLs give a
/// MockChatProvider, where policy is final-word, majority-script,
/// fixed-<lang> or alternate-<lang>-<lang>. Throws ConfigError.
std::shared_ptr<ChatProvider> make_provider(const EndpointConfig& endpoint,
                                            const PromptCatalog& catalog);

}  // namespace ola
