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

#include "papeo/json_io.hpp"

#include "papeo/errors.hpp"

namespace papeo {
namespace {

const Json& require(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key, "missing required field");
  return *it;
}

std::string get_string(const Json& j, const char* key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_string()) throw SchemaError(path + "/" + key, "expected string");
  return v.get<std::string>();
}

std::string get_string_or(const Json& j, const char* key, const std::string& path,
                          std::string fallback) {
  if (!j.contains(key)) return fallback;
  return get_string(j, key, path);
}

double get_number(const Json& j, const char* key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_number()) throw SchemaError(path + "/" + key, "expected number");
  return v.get<double>();
}

std::int64_t get_integer(const Json& j, const char* key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + "/" + key, "expected integer");
  return v.get<std::int64_t>();
}

std::size_t get_index(const Json& j, const char* key, const std::string& path) {
  auto v = get_integer(j, key, path);
  if (v < 0) throw SchemaError(path + "/" + key, "expected non-negative integer");
  return static_cast<std::size_t>(v);
}

const Json& get_array(const Json& j, const char* key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_array()) throw SchemaError(path + "/" + key, "expected array");
  return v;
}

std::vector<std::string> get_string_list(const Json& j, const char* key,
                                         const std::string& path) {
  const Json& arr = get_array(j, key, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      throw SchemaError(path + "/" + key + "/" + std::to_string(i), "expected string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

}  // namespace

Json parse_json(std::string_view bytes) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte, ParseError::Unit::byte);
  }
}

Json to_json(const Passage& p) {
  Json j;
  j["id"] = p.id;
  j["kind"] = std::string(to_string(p.kind));
  j["section_path"] = p.section_path;
  j["page"] = p.page;
  j["bbox"] = {{"x", p.bbox.x}, {"y", p.bbox.y}, {"w", p.bbox.w}, {"h", p.bbox.h}};
  j["text"] = p.text;
  return j;
}

Json to_json(const PaperDocument& paper) {
  Json j;
  j["paper_id"] = paper.paper_id;
  j["title"] = paper.title;
  j["passages"] = Json::array();
  for (const auto& p : paper.passages) j["passages"].push_back(to_json(p));
  j["source"] = paper.source;
  return j;
}

Json to_json(const TranscriptLine& line) {
  return {{"index", line.index},
          {"start_ms", line.start.count()},
          {"end_ms", line.end.count()},
          {"text", line.text}};
}

Json to_json(const VideoSegment& segment) {
  return {{"id", segment.id},
          {"start_ms", segment.start.count()},
          {"end_ms", segment.end.count()},
          {"line_indices", segment.line_indices}};
}

Json to_json(const PassageLink& link) {
  return {{"segment_id", link.segment_id}, {"passage_ids", link.passage_ids}};
}

Json to_json(const SyncHighlight& h) {
  Json j;
  j["id"] = h.id;
  j["segment_id"] = h.segment_id;
  j["passage_id"] = h.passage_id;
  j["transcript_span"] = {{"line_index", h.transcript_span.line_index},
                          {"token_start", h.transcript_span.token_start},
                          {"token_end", h.transcript_span.token_end}};
  j["passage_span"] = {{"token_start", h.passage_span.token_start},
                       {"token_end", h.passage_span.token_end}};
  return j;
}

Json to_json(const VideoMeta& video) {
  Json j;
  j["uri"] = video.uri;
  j["duration_ms"] = video.duration.count();
  if (video.frame_rate) j["frame_rate"] = *video.frame_rate;
  return j;
}

Json to_json(const PapeoDoc& doc) {
  Json j;
  j["schema_version"] = doc.schema_version;
  j["paper"] = to_json(doc.paper);
  j["video"] = to_json(doc.video);
  j["transcript"] = Json::array();
  for (const auto& l : doc.transcript) j["transcript"].push_back(to_json(l));
  j["segments"] = Json::array();
  for (const auto& s : doc.segments) j["segments"].push_back(to_json(s));
  j["links"] = Json::array();
  for (const auto& l : doc.links) j["links"].push_back(to_json(l));
  j["sync_highlights"] = Json::array();
  for (const auto& h : doc.sync_highlights) j["sync_highlights"].push_back(to_json(h));
  return j;
}

Json to_json(const Violation& v) {
  Json j = {{"type", v.type}, {"id", v.id}, {"rule", v.rule}};
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

Json to_json(const std::vector<Violation>& violations) {
  Json arr = Json::array();
  for (const auto& v : violations) arr.push_back(to_json(v));
  return arr;
}

Json to_json(const PapeoStats& stats) {
  Json j;
  j["num_links"] = stats.num_links;
  j["avg_passages_per_link"] =
      stats.avg_passages_per_link ? Json(*stats.avg_passages_per_link) : Json(nullptr);
  j["avg_segment_len_s"] =
      stats.avg_segment_len_s ? Json(*stats.avg_segment_len_s) : Json(nullptr);
  j["num_sync_highlights"] = stats.num_sync_highlights;
  return j;
}

Passage passage_from_json(const Json& j, const std::string& path) {
  Passage p;
  p.id = get_string(j, "id", path);
  auto kind = get_string(j, "kind", path);
  auto parsed = passage_kind_from_string(kind);
  if (!parsed) throw SchemaError(path + "/kind", "unknown passage kind '" + kind + "'");
  p.kind = *parsed;
  p.section_path = j.contains("section_path")
                       ? get_string_list(j, "section_path", path)
                       : std::vector<std::string>{};
  p.page = static_cast<int>(get_integer(j, "page", path));
  const Json& bbox = require(j, "bbox", path);
  const std::string bpath = path + "/bbox";
  p.bbox = {get_number(bbox, "x", bpath), get_number(bbox, "y", bpath),
            get_number(bbox, "w", bpath), get_number(bbox, "h", bpath)};
  p.text = get_string_or(j, "text", path, "");
  return p;
}

PaperDocument paper_from_json(const Json& j, const std::string& path) {
  PaperDocument paper;
  paper.paper_id = get_string(j, "paper_id", path);
  paper.title = get_string_or(j, "title", path, "");
  paper.source = get_string_or(j, "source", path, "");
  const Json& passages = get_array(j, "passages", path);
  for (std::size_t i = 0; i < passages.size(); ++i) {
    paper.passages.push_back(
        passage_from_json(passages[i], path + "/passages/" + std::to_string(i)));
  }
  return paper;
}

TranscriptLine transcript_line_from_json(const Json& j, const std::string& path) {
  return {get_index(j, "index", path), Millis{get_integer(j, "start_ms", path)},
          Millis{get_integer(j, "end_ms", path)}, get_string(j, "text", path)};
}

VideoSegment segment_from_json(const Json& j, const std::string& path) {
  VideoSegment s;
  s.id = get_string(j, "id", path);
  s.start = Millis{get_integer(j, "start_ms", path)};
  s.end = Millis{get_integer(j, "end_ms", path)};
  if (j.contains("line_indices")) {
    const Json& arr = get_array(j, "line_indices", path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_unsigned()) {
        throw SchemaError(path + "/line_indices/" + std::to_string(i),
                          "expected non-negative integer");
      }
      s.line_indices.push_back(arr[i].get<std::size_t>());
    }
  }
  return s;
}

PassageLink link_from_json(const Json& j, const std::string& path) {
  return {get_string(j, "segment_id", path), get_string_list(j, "passage_ids", path)};
}

SyncHighlight sync_highlight_from_json(const Json& j, const std::string& path) {
  SyncHighlight h;
  h.id = get_string(j, "id", path);
  h.segment_id = get_string(j, "segment_id", path);
  h.passage_id = get_string(j, "passage_id", path);
  const Json& ts = require(j, "transcript_span", path);
  const std::string tpath = path + "/transcript_span";
  h.transcript_span = {get_index(ts, "line_index", tpath), get_index(ts, "token_start", tpath),
                       get_index(ts, "token_end", tpath)};
  const Json& ps = require(j, "passage_span", path);
  const std::string ppath = path + "/passage_span";
  h.passage_span = {get_index(ps, "token_start", ppath), get_index(ps, "token_end", ppath)};
  return h;
}

VideoMeta video_from_json(const Json& j, const std::string& path) {
  VideoMeta v;
  v.uri = get_string_or(j, "uri", path, "");
  v.duration = Millis{get_integer(j, "duration_ms", path)};
  if (j.contains("frame_rate") && !j["frame_rate"].is_null()) {
    v.frame_rate = get_number(j, "frame_rate", path);
  }
  return v;
}

PapeoDoc doc_from_json(const Json& j) {
  PapeoDoc doc;
  doc.schema_version = get_string(j, "schema_version", "");
  if (doc.schema_version != kSchemaVersion) throw VersionError(doc.schema_version);
  doc.paper = paper_from_json(require(j, "paper", ""), "/paper");
  doc.video = video_from_json(require(j, "video", ""), "/video");
  const Json& transcript = get_array(j, "transcript", "");
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    doc.transcript.push_back(
        transcript_line_from_json(transcript[i], "/transcript/" + std::to_string(i)));
  }
  const Json& segments = get_array(j, "segments", "");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    doc.segments.push_back(segment_from_json(segments[i], "/segments/" + std::to_string(i)));
  }
  const Json& links = get_array(j, "links", "");
  for (std::size_t i = 0; i < links.size(); ++i) {
    doc.links.push_back(link_from_json(links[i], "/links/" + std::to_string(i)));
  }
  const Json& highlights = get_array(j, "sync_highlights", "");
  for (std::size_t i = 0; i < highlights.size(); ++i) {
    doc.sync_highlights.push_back(
        sync_highlight_from_json(highlights[i], "/sync_highlights/" + std::to_string(i)));
  }
  return doc;
}

std::string serialize(const PapeoDoc& doc) {
  auto violations = validate(doc);
  if (!violations.empty()) throw Invalid(std::move(violations));
  return to_json(doc).dump(2) + "\n";
}

PapeoDoc deserialize(std::string_view bytes) { return doc_from_json(parse_json(bytes)); }

}  // namespace papeo
