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
#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace ola {

struct ChatMessage {
  std::string role;  ///< "system", "user" or "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct GenerationParams {
  double temperature = 0.7;
  double top_p = 0.9;

  friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

/// Where and how to reach one chat-completion endpoint.
struct EndpointConfig {
  std::string base_url;                  ///< e.g. "http://localhost:8000"
  std::string path = "/v1/chat/completions";
  std::string model_id;
  std::string api_key_env;               ///< name of the variable holding the key
  std::string auth_header = "Authorization";
  GenerationParams params;
  int max_retries = 3;                   ///< retries after the first attempt
  double request_timeout_s = 120.0;
  std::size_t parallelism_limit = 4;
  std::chrono::milliseconds backoff_base{500};

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

EndpointConfig endpoint_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EndpointConfig& c);  // never includes the key itself

struct ChatRequest {
  std::string model_id;
  std::vector<ChatMessage> messages;
  GenerationParams params;
  std::size_t sample_index = 0;

  /// SHA-256 over the canonical JSON of (model_id, messages, params,
  /// sample_index). Timestamps never enter the key.
  std::string cache_key() const;
};

struct ProviderReply {
  int status = 0;  ///< HTTP-like status; 0 means transport failure
  std::string text;
  std::string finish_reason;
  std::string error;
};

/// Transport to a chat endpoint. Implementations must be thread-safe.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual ProviderReply send(const ChatRequest& request, const EndpointConfig& endpoint) = 0;
};

/// OpenAI-style HTTP(S) chat-completion provider.
class HttpChatProvider final : public ChatProvider {
 public:
  ProviderReply send(const ChatRequest& request, const EndpointConfig& endpoint) override;
};

struct CachedResponse {
  std::string key;
  std::string model_id;
  std::string text;
  std::string finish_reason;
  std::string created_at;
};

/// Append-only line-JSON response cache keyed by request digest. An empty
/// path keeps the cache in memory only. Writes are serialized.
class ResponseCache {
 public:
  explicit ResponseCache(std::string path = {});

  std::optional<CachedResponse> get(const std::string& key) const;
  void put(CachedResponse entry);
  std::size_t size() const;
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, CachedResponse> entries_;
};

struct BatchOutcome {
  std::optional<std::string> text;
  std::string error;
};

/// Cache-first chat client with retries and bounded fan-out.
class LlmClient {
 public:
  LlmClient(EndpointConfig endpoint, std::shared_ptr<ChatProvider> provider,
            std::shared_ptr<ResponseCache> cache = nullptr, bool offline = false);

  ChatRequest make_request(std::vector<ChatMessage> messages, std::size_t sample_index = 0) const;

  /// Cache hit returns immediately. On a miss: CacheOnlyMiss when offline,
  /// otherwise up to 1 + max_retries attempts with exponential backoff on
  /// transport errors, 408, 429 and 5xx. The reply is cached before return.
  std::string complete(const ChatRequest& request);
  std::string complete(std::vector<ChatMessage> messages, std::size_t sample_index = 0);

  /// Runs requests with at most `parallelism_limit` in flight. Outcomes are
  /// returned in request order regardless of completion order.
  std::vector<BatchOutcome> complete_batch(const std::vector<ChatRequest>& requests);

  const EndpointConfig& endpoint() const noexcept { return endpoint_; }
  std::size_t network_calls() const noexcept { return network_calls_.load(); }
  bool offline() const noexcept { return offline_; }

 private:
  EndpointConfig endpoint_;
  std::shared_ptr<ChatProvider> provider_;
  std::shared_ptr<ResponseCache> cache_;
  bool offline_;
  std::atomic<std::size_t> network_calls_{0};
};

}  // namespace ola
