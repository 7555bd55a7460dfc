// Copyright 2026 The Papeo Authors
//
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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "papeo/linking.hpp"
#include "papeo/store.hpp"

namespace httplib {
class Server;
}

namespace papeo::service {

struct SegmentProposal {
  std::vector<std::size_t> line_indices;
  Millis start{0};
  Millis end{0};
  std::string text;
};

struct SegmentProposals {
  long long revision = 0;
  std::vector<SegmentProposal> proposals;
};

struct LinkSuggestions {
  long long revision = 0;
  std::string segment_id;
  bool degraded = false;  // embedding provider failed, ROUGE-L only
  std::vector<linking::Suggestion> suggestions;
};

struct ServiceConfig {
  linking::LinkerConfig linker;
  std::string punctuation_set{".!?"};
  std::optional<std::filesystem::path> static_dir;  // webapp bundle at "/"
  std::optional<std::filesystem::path> media_dir;   // served at "/media"
};

/// Authoring/reading backend over a Store. Suggestion calls are read-only and
/// deterministic for a given document revision.
class Service {
 public:
  Service(store::Store& store, ServiceConfig config,
          std::shared_ptr<const linking::EmbeddingProvider> provider);

  store::Store& store() { return store_; }
  const ServiceConfig& config() const { return config_; }

  /// One proposal per sentence group of the transcript.
  SegmentProposals suggest_segments(const std::string& id) const;

  /// Top-k passages for a segment (k defaults to the linker's top_k).
  LinkSuggestions suggest_links(const std::string& id, const std::string& segment_id,
                                std::optional<std::size_t> k = std::nullopt) const;

  /// Registers the HTTP+JSON API routes and static mounts.
  void register_routes(httplib::Server& server);

 private:
  store::Store& store_;
  ServiceConfig config_;
  std::shared_ptr<const linking::EmbeddingProvider> provider_;
};

}  // namespace papeo::service
