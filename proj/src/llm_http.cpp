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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <cstdlib>

#include "json.hpp"
#include "ola/llm.hpp"

namespace ola {

ProviderReply HttpChatProvider::send(const ChatRequest& request, const EndpointConfig& endpoint) {
  ProviderReply reply;
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : request.messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  const nlohmann::json body{{"model", request.model_id},
                            {"messages", msgs},
                            {"temperature", request.params.temperature},
                            {"top_p", request.params.top_p}};

  httplib::Client client(endpoint.base_url);
  const auto secs = static_cast<time_t>(endpoint.request_timeout_s);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);
  client.set_connection_timeout(std::min<time_t>(secs, 30), 0);

  httplib::Headers headers;
  std::string secret;
  if (!endpoint.api_key_env.empty()) {
    if (const char* key = std::getenv(endpoint.api_key_env.c_str()); key && *key) {
      secret = key;
      const std::string value =
          endpoint.auth_header == "Authorization" ? std::string("Bearer ") + key : std::string(key);
      headers.emplace(endpoint.auth_header, value);
    }
  }
  auto res = client.Post(endpoint.path, headers, body.dump(), "application/json");
  if (!res) {
    reply.status = 0;
    reply.error = httplib::to_string(res.error());
    return reply;
  }
  reply.status = res->status;
  if (res->status < 200 || res->status >= 300) {
    // Upstream error bodies sometimes echo request headers.
    reply.error = res->body;
    if (!secret.empty())
      for (auto at = reply.error.find(secret); at != std::string::npos; at = reply.error.find(secret, at))
        reply.error.replace(at, secret.size(), "[redacted]");
    reply.error.resize(std::min<std::size_t>(reply.error.size(), 500));
    return reply;
  }
  try {
    const auto j = nlohmann::json::parse(res->body);
    const auto& choice = j.at("choices").at(0);
    reply.text = choice.at("message").at("content").get<std::string>();
    if (choice.contains("finish_reason") && choice["finish_reason"].is_string())
      reply.finish_reason = choice["finish_reason"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    reply.status = 502;
    reply.error = std::string("malformed completion body: ") + e.what();
  }
  return reply;
}

}  // namespace ola
