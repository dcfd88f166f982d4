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

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ola/dataset.hpp"
#include "ola/records.hpp"

namespace httplib {
class Server;
}

namespace ola {

/// Task queue and record store behind the annotation HTTP API.
///
///   GET  /api/tasks/next?annotator=ID  next unannotated item in dataset order
///   POST /api/annotations              one record per body line
///   GET  /api/progress?annotator=ID    counts
///
/// Errors come back as {"error", "detail"} with a 4xx status.
class AnnotationService {
 public:
  /// Loads earlier submissions from `store_path` when it exists.
  AnnotationService(std::vector<PromptRecord> items, std::string store_path);
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  Json next_task(const std::string& annotator) const;
  /// Validates, appends and returns {"ok": true, "count": n}. Throws
  /// ValidationError; nothing is stored unless every line is valid.
  Json submit(std::string_view body);
  Json progress(const std::string& annotator) const;

  /// Latest record per (item, annotator), in item then annotator order.
  std::vector<AnnotationRecord> records() const;

  /// Binds (port 0 picks a free port), serves on a background thread and
  /// returns the bound port. `static_dir` is mounted at "/" when set.
  int start(const std::string& host = "127.0.0.1", int port = 0,
            const std::string& static_dir = {});
  /// Blocks serving on the calling thread.
  void serve(const std::string& host, int port, const std::string& static_dir = {});
  void stop();

 private:
  void install_routes(const std::string& static_dir);
  Json options_for(const PromptRecord& item) const;
  void validate_choice(const AnnotationRecord& r) const;

  std::vector<PromptRecord> items_;
  std::map<std::string, std::size_t> index_;
  std::string store_path_;
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, AnnotationRecord> latest_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

/// Every record of an annotation store, in file order.
std::vector<AnnotationRecord> read_annotation_store(const std::string& path);

}  // namespace ola
