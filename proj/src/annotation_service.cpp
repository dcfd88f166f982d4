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
#include "ola/annotation_service.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>

#include "httplib.h"
#include "ola/errors.hpp"
#include "ola/jsonl.hpp"

namespace ola {
namespace {

constexpr const char* kComplexGuidance =
    "Choose the expected language from the language of the resulting content only.";

std::string utc_now_ms() {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump() + "\n", "application/json");
}

}  // namespace

std::vector<AnnotationRecord> read_annotation_store(const std::string& path) {
  std::vector<AnnotationRecord> out;
  for (const auto& j : jsonl::read(path)) out.push_back(annotation_from_json(j));
  return out;
}

AnnotationService::AnnotationService(std::vector<PromptRecord> items, std::string store_path)
    : items_(std::move(items)), store_path_(std::move(store_path)) {
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (!index_.emplace(items_[i].id, i).second) throw ValidationError("duplicate item id " + items_[i].id);
  if (std::filesystem::exists(store_path_)) {
    for (auto& r : read_annotation_store(store_path_)) {
      auto key = std::make_pair(r.item_id, r.annotator_id);
      latest_.insert_or_assign(std::move(key), std::move(r));
    }
    spdlog::info("annotation store {}: resumed {} record(s)", store_path_, latest_.size());
  }
}

AnnotationService::~AnnotationService() { stop(); }

Json AnnotationService::options_for(const PromptRecord& item) const {
  Json langs = Json::array();
  std::vector<Language> seen;
  const auto add = [&](const std::optional<Language>& l) {
    if (l && std::find(seen.begin(), seen.end(), *l) == seen.end()) {
      seen.push_back(*l);
      langs.push_back({{"value", l->code()}, {"label", language_name(*l)}});
    }
  };
  if (item.setting == Setting::Simple) {
    add(item.matrix_lang);
    add(item.embedded_lang);
  } else {
    add(item.instruction_lang);
    add(item.content_lang);
  }
  langs.push_back({{"value", "Either"}, {"label", "Either"}});
  Json sev = Json::array();
  for (auto s : {Severity::Trivial, Severity::Uncomfortable, Severity::Critical}) sev.push_back(to_string(s));
  return {{"expected_lang", langs}, {"severity", sev}};
}

void AnnotationService::validate_choice(const AnnotationRecord& r) const {
  const auto it = index_.find(r.item_id);
  if (it == index_.end()) throw ValidationError("unknown item_id " + r.item_id);
  if (r.annotator_id.empty()) throw ValidationError("annotator_id is empty");
  if (r.expected_lang.is_either()) return;
  const Json options = options_for(items_[it->second]);
  for (const auto& o : options.at("expected_lang"))
    if (o.at("value") == r.expected_lang.str()) return;
  throw ValidationError("expected_lang " + r.expected_lang.str() + " is not an option for " + r.item_id);
}

Json AnnotationService::next_task(const std::string& annotator) const {
  if (annotator.empty()) throw ValidationError("annotator is required");
  std::lock_guard lock(mu_);
  for (const auto& item : items_) {
    if (latest_.contains({item.id, annotator})) continue;
    Json task{{"item_id", item.id},
              {"text", item.text},
              {"setting", to_string(item.setting)},
              {"options", options_for(item)}};
    if (item.setting == Setting::Complex) {
      task["guidance"] = kComplexGuidance;
      // The instruction is the part before or after the blank line.
      const auto cut = item.text.find("\n\n");
      if (cut != std::string::npos && item.position) {
        task["instruction"] = *item.position == Position::InstrFirst ? item.text.substr(0, cut)
                                                                     : item.text.substr(cut + 2);
      }
    }
    return task;
  }
  return {{"done", true}};
}

Json AnnotationService::submit(std::string_view body) {
  std::vector<AnnotationRecord> batch;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto end = body.find('\n', start);
    if (end == std::string_view::npos) end = body.size();
    const auto line = body.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("record must be a JSON object");
    if (!j.contains("submitted_at")) j["submitted_at"] = utc_now_ms();
    auto r = annotation_from_json(j);
    validate_choice(r);
    batch.push_back(std::move(r));
  }
  if (batch.empty()) throw ValidationError("no records in body");

  std::lock_guard lock(mu_);
  for (auto& r : batch) {
    jsonl::append(store_path_, to_json(r));
    auto key = std::make_pair(r.item_id, r.annotator_id);
    if (latest_.contains(key))
      spdlog::info("annotation for ({}, {}) replaced by a newer submission", r.item_id, r.annotator_id);
    latest_.insert_or_assign(std::move(key), std::move(r));
  }
  return {{"ok", true}, {"count", batch.size()}};
}

Json AnnotationService::progress(const std::string& annotator) const {
  std::lock_guard lock(mu_);
  std::size_t done = 0;
  if (!annotator.empty())
    for (const auto& item : items_) done += latest_.contains({item.id, annotator}) ? 1 : 0;
  Json j{{"total", items_.size()}, {"records", latest_.size()}};
  if (!annotator.empty()) {
    j["annotator"] = annotator;
    j["done"] = done;
    j["remaining"] = items_.size() - done;
  }
  return j;
}

std::vector<AnnotationRecord> AnnotationService::records() const {
  std::lock_guard lock(mu_);
  std::vector<AnnotationRecord> out;
  for (const auto& [k, r] : latest_) out.push_back(r);
  return out;
}

void AnnotationService::install_routes(const std::string& static_dir) {
  server_ = std::make_unique<httplib::Server>();
  auto guarded = [](auto fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ValidationError& e) {
        send_json(res, {{"error", "ValidationError"}, {"detail", e.what()}}, 400);
      } catch (const Error& e) {
        send_json(res, {{"error", "Error"}, {"detail", e.what()}}, 500);
      }
    };
  };
  server_->Get("/api/tasks/next", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, next_task(req.get_param_value("annotator")));
  }));
  server_->Post("/api/annotations", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, submit(req.body));
  }));
  server_->Get("/api/progress", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, progress(req.get_param_value("annotator")));
  }));
  if (!static_dir.empty() && !server_->set_mount_point("/", static_dir))
    throw ConfigError("static directory not found: " + static_dir);
}

int AnnotationService::start(const std::string& host, int port, const std::string& static_dir) {
  if (server_) throw ConfigError("annotation service already running");
  install_routes(static_dir);
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    server_.reset();
    throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  spdlog::info("annotation service on {}:{} ({} items)", host, bound, items_.size());
  return bound;
}

void AnnotationService::serve(const std::string& host, int port, const std::string& static_dir) {
  install_routes(static_dir);
  spdlog::info("annotation service on {}:{} ({} items)", host, port, items_.size());
  if (!server_->listen(host, port)) throw ConfigError("cannot listen on " + host + ":" + std::to_string(port));
}

void AnnotationService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
  server_.reset();
}

}  // namespace ola
