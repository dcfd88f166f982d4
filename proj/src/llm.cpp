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

#include "ola/llm.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include "ola/errors.hpp"
#include "ola/jsonl.hpp"

namespace ola {

namespace {

bool retriable(int status) { return status == 0 || status == 408 || status == 429 || status >= 500; }


}  // namespace

void EndpointConfig::validate() const {
  if (model_id.empty()) throw ConfigError("endpoint needs a model_id");
  if (params.temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (params.top_p <= 0.0 || params.top_p > 1.0) throw ConfigError("top_p must be in (0, 1]");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (parallelism_limit == 0) throw ConfigError("parallelism_limit must be >= 1");
  if (request_timeout_s <= 0.0) throw ConfigError("request_timeout must be > 0");
}

EndpointConfig endpoint_from_json(const nlohmann::json& j) {
  EndpointConfig c;
  c.base_url = j.value("base_url", "");
  c.path = j.value("path", c.path);
  c.model_id = j.value("model_id", "");
  c.api_key_env = j.value("api_key_env", j.value("api_key_ref", ""));
  c.auth_header = j.value("auth_header", c.auth_header);
  c.params.temperature = j.value("temperature", c.params.temperature);
  c.params.top_p = j.value("top_p", c.params.top_p);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.request_timeout_s = j.value("request_timeout", c.request_timeout_s);
  c.parallelism_limit = j.value("parallelism_limit", c.parallelism_limit);
  c.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", 500));
  c.validate();
  return c;
}

nlohmann::json to_json(const EndpointConfig& c) {
  return {{"base_url", c.base_url},
          {"path", c.path},
          {"model_id", c.model_id},
          {"api_key_env", c.api_key_env},
          {"temperature", c.params.temperature},
          {"top_p", c.params.top_p},
          {"max_retries", c.max_retries},
          {"request_timeout", c.request_timeout_s},
          {"parallelism_limit", c.parallelism_limit}};
}

std::string ChatRequest::cache_key() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  const nlohmann::json j{{"model_id", model_id},
                         {"messages", msgs},
                         {"params", {{"temperature", params.temperature}, {"top_p", params.top_p}}},
                         {"sample_index", sample_index}};
  return sha256_hex(jsonl::dump(j));
}

ResponseCache::ResponseCache(std::string path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  for (const auto& j : jsonl::read(path_)) {
    CachedResponse c{j.at("key").get<std::string>(), j.value("model_id", ""),
                     j.at("text").get<std::string>(), j.value("finish_reason", ""),
                     j.value("created_at", "")};
    entries_.insert_or_assign(c.key, std::move(c));
  }
}

std::optional<CachedResponse> ResponseCache::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::put(CachedResponse entry) {
  std::lock_guard lock(mu_);
  if (!path_.empty()) {
    const std::filesystem::path p(path_);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    jsonl::append(path_, {{"key", entry.key},
                          {"model_id", entry.model_id},
                          {"text", entry.text},
                          {"finish_reason", entry.finish_reason},
                          {"created_at", entry.created_at}});
  }
  entries_.insert_or_assign(entry.key, std::move(entry));
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

LlmClient::LlmClient(EndpointConfig endpoint, std::shared_ptr<ChatProvider> provider,
                     std::shared_ptr<ResponseCache> cache, bool offline)
    : endpoint_(std::move(endpoint)),
      provider_(std::move(provider)),
      cache_(cache ? std::move(cache) : std::make_shared<ResponseCache>()),
      offline_(offline) {
  endpoint_.validate();
}

ChatRequest LlmClient::make_request(std::vector<ChatMessage> messages,
                                    std::size_t sample_index) const {
  return {endpoint_.model_id, std::move(messages), endpoint_.params, sample_index};
}

std::string LlmClient::complete(std::vector<ChatMessage> messages, std::size_t sample_index) {
  return complete(make_request(std::move(messages), sample_index));
}

std::string LlmClient::complete(const ChatRequest& request) {
  const std::string key = request.cache_key();
  if (auto hit = cache_->get(key)) return hit->text;
  if (offline_) throw CacheOnlyMiss("no cached response for key " + key.substr(0, 12));
  if (!provider_) throw LlmError(0, 0, "no provider configured");

  ProviderReply reply;
  int attempt = 0;
  const int max_attempts = 1 + endpoint_.max_retries;
  while (true) {
    ++attempt;
    ++network_calls_;
    reply = provider_->send(request, endpoint_);
    if (reply.status >= 200 && reply.status < 300) break;
    if (!retriable(reply.status) || attempt >= max_attempts) {
      throw LlmError(reply.status, attempt, reply.error);
    }
    spdlog::warn("chat request failed (status {}), retry {}/{}", reply.status, attempt,
                 endpoint_.max_retries);
    const auto delay = endpoint_.backoff_base * (1LL << (attempt - 1));
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
  }
  cache_->put({key, request.model_id, reply.text, reply.finish_reason, utc_now_iso()});
  return reply.text;
}

std::vector<BatchOutcome> LlmClient::complete_batch(const std::vector<ChatRequest>& requests) {
  std::vector<BatchOutcome> out(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      try {
        out[i].text = complete(requests[i]);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::min(endpoint_.parallelism_limit, requests.size());
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return out;
}

}  // namespace ola
