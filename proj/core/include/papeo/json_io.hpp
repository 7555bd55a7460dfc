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

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

#include "papeo/model.hpp"

namespace papeo {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ParseError with the byte offset.
Json parse_json(std::string_view bytes);

Json to_json(const Passage& p);
Json to_json(const PaperDocument& paper);
Json to_json(const TranscriptLine& line);
Json to_json(const VideoSegment& segment);
Json to_json(const PassageLink& link);
Json to_json(const SyncHighlight& highlight);
Json to_json(const VideoMeta& video);
Json to_json(const PapeoDoc& doc);
Json to_json(const Violation& v);
Json to_json(const PapeoStats& stats);
Json to_json(const std::vector<Violation>& violations);

// The *_from_json readers throw SchemaError carrying a JSON pointer rooted at
// `path`.
Passage passage_from_json(const Json& j, const std::string& path = "");
PaperDocument paper_from_json(const Json& j, const std::string& path = "");
TranscriptLine transcript_line_from_json(const Json& j, const std::string& path = "");
VideoSegment segment_from_json(const Json& j, const std::string& path = "");
PassageLink link_from_json(const Json& j, const std::string& path = "");
SyncHighlight sync_highlight_from_json(const Json& j, const std::string& path = "");
VideoMeta video_from_json(const Json& j, const std::string& path = "");
PapeoDoc doc_from_json(const Json& j);

/// Canonical `papeo.json` bytes. Throws Invalid unless validate(doc) is empty.
std::string serialize(const PapeoDoc& doc);

/// Throws ParseError (byte offset), VersionError or SchemaError.
PapeoDoc deserialize(std::string_view bytes);

}  // namespace papeo
