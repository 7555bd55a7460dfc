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

#include "papeo/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "papeo/errors.hpp"
#include "papeo/text.hpp"

namespace papeo {

Invalid::Invalid(std::vector<Violation> violations)
    : Error([&] {
        std::string msg = "document invalid:";
        for (const auto& v : violations) {
          msg += " " + v.type + "[" + v.id + "]:" + v.rule;
        }
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::string_view to_string(PassageKind kind) {
  switch (kind) {
    case PassageKind::paragraph: return "paragraph";
    case PassageKind::figure: return "figure";
    case PassageKind::table: return "table";
    case PassageKind::caption: return "caption";
    case PassageKind::heading: return "heading";
  }
  return "paragraph";
}

std::optional<PassageKind> passage_kind_from_string(std::string_view s) {
  if (s == "paragraph") return PassageKind::paragraph;
  if (s == "figure") return PassageKind::figure;
  if (s == "table") return PassageKind::table;
  if (s == "caption") return PassageKind::caption;
  if (s == "heading") return PassageKind::heading;
  return std::nullopt;
}

const Passage* PaperDocument::find(std::string_view passage_id) const {
  for (const auto& p : passages) {
    if (p.id == passage_id) return &p;
  }
  return nullptr;
}

std::optional<std::size_t> PaperDocument::index_of(std::string_view passage_id) const {
  for (std::size_t i = 0; i < passages.size(); ++i) {
    if (passages[i].id == passage_id) return i;
  }
  return std::nullopt;
}

const VideoSegment* PapeoDoc::find_segment(std::string_view segment_id) const {
  for (const auto& s : segments) {
    if (s.id == segment_id) return &s;
  }
  return nullptr;
}

const PassageLink* PapeoDoc::find_link(std::string_view segment_id) const {
  for (const auto& l : links) {
    if (l.segment_id == segment_id) return &l;
  }
  return nullptr;
}

namespace {

void add(std::vector<Violation>& out, std::string type, std::string id,
         std::string rule, std::string detail = {}) {
  out.push_back({std::move(type), std::move(id), std::move(rule), std::move(detail)});
}

bool contiguous(const std::vector<std::size_t>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] != v[i - 1] + 1) return false;
  }
  return true;
}

}  // namespace

std::vector<Violation> validate_paper(const PaperDocument& paper) {
  std::vector<Violation> out;
  if (paper.passages.empty()) {
    add(out, "paper", paper.paper_id, "paper-empty", "at least one passage required");
  }
  std::unordered_set<std::string> seen;
  int last_page = 1;
  for (const auto& p : paper.passages) {
    if (p.id.empty()) add(out, "passage", p.id, "passage-id-empty");
    if (!seen.insert(p.id).second) add(out, "passage", p.id, "passage-id-unique");
    if (p.page < 1) add(out, "passage", p.id, "passage-page", "page must be >= 1");
    if (!(p.bbox.w >= 0) || !(p.bbox.h >= 0) || !std::isfinite(p.bbox.x) ||
        !std::isfinite(p.bbox.y) || !std::isfinite(p.bbox.w) || !std::isfinite(p.bbox.h)) {
      add(out, "passage", p.id, "passage-bbox");
    }
    if (p.kind == PassageKind::paragraph && text::trim(p.text).empty()) {
      add(out, "passage", p.id, "paragraph-text", "paragraph needs text");
    }
    if (p.page < last_page) add(out, "passage", p.id, "passage-order");
    last_page = std::max(last_page, p.page);
  }
  return out;
}

std::vector<Violation> validate_transcript(const std::vector<TranscriptLine>& lines) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const auto id = std::to_string(i);
    if (l.index != i) add(out, "transcript-line", id, "line-index");
    if (l.start.count() < 0 || l.start >= l.end) add(out, "transcript-line", id, "line-time");
    if (i > 0 && l.start < lines[i - 1].start) add(out, "transcript-line", id, "line-order");
  }
  return out;
}

std::vector<Violation> validate(const PapeoDoc& doc) {
  std::vector<Violation> out;
  if (doc.schema_version != kSchemaVersion) {
    add(out, "doc", doc.schema_version, "schema-version");
  }
  auto paper = validate_paper(doc.paper);
  out.insert(out.end(), paper.begin(), paper.end());
  auto transcript = validate_transcript(doc.transcript);
  out.insert(out.end(), transcript.begin(), transcript.end());

  if (doc.video.duration.count() < 0) add(out, "video", doc.video.uri, "video-duration");
  if (doc.video.frame_rate && !(*doc.video.frame_rate > 0)) {
    add(out, "video", doc.video.uri, "video-frame-rate");
  }
  for (const auto& l : doc.transcript) {
    if (l.end > doc.video.duration) {
      add(out, "transcript-line", std::to_string(l.index), "line-duration",
          "line ends after video");
    }
  }

  // Segments.
  std::unordered_set<std::string> segment_ids;
  for (const auto& s : doc.segments) {
    if (s.id.empty() || !segment_ids.insert(s.id).second) {
      add(out, "segment", s.id, "segment-id-unique");
    }
    if (s.start.count() < 0 || s.start >= s.end) add(out, "segment", s.id, "segment-time");
    if (s.end > doc.video.duration) add(out, "segment", s.id, "segment-duration");
    bool lines_ok = contiguous(s.line_indices);
    for (auto li : s.line_indices) lines_ok = lines_ok && li < doc.transcript.size();
    if (!lines_ok) add(out, "segment", s.id, "segment-lines");
  }
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.segments.size(); ++j) {
      const auto& a = doc.segments[i];
      const auto& b = doc.segments[j];
      if (a.start < b.end && b.start < a.end) {
        add(out, "segment", b.id, "segment-overlap", "overlaps " + a.id);
      } else if (b.end <= a.start) {
        add(out, "segment", b.id, "segment-order", "precedes " + a.id);
      }
    }
  }

  // Links.
  std::unordered_set<std::string> linked_segments;
  std::set<std::pair<std::string, std::string>> linked_pairs;
  for (const auto& l : doc.links) {
    if (!segment_ids.contains(l.segment_id)) {
      add(out, "link", l.segment_id, "dangling-reference", "unknown segment");
    }
    if (!linked_segments.insert(l.segment_id).second) {
      add(out, "link", l.segment_id, "link-duplicate");
    }
    if (l.passage_ids.empty()) add(out, "link", l.segment_id, "link-empty");
    std::unordered_set<std::string> in_link;
    for (const auto& pid : l.passage_ids) {
      if (!doc.paper.find(pid)) {
        add(out, "link", l.segment_id, "dangling-reference", "unknown passage " + pid);
      }
      if (!in_link.insert(pid).second) {
        add(out, "link", l.segment_id, "link-passage-duplicate", pid);
      }
      linked_pairs.emplace(l.segment_id, pid);
    }
  }

  // Sync highlights.
  std::unordered_set<std::string> highlight_ids;
  for (const auto& h : doc.sync_highlights) {
    if (h.id.empty() || !highlight_ids.insert(h.id).second) {
      add(out, "sync-highlight", h.id, "highlight-id-unique");
    }
    const VideoSegment* seg = doc.find_segment(h.segment_id);
    const Passage* passage = doc.paper.find(h.passage_id);
    if (!seg || !passage) {
      add(out, "sync-highlight", h.id, "dangling-reference");
      continue;
    }
    if (!linked_pairs.contains({h.segment_id, h.passage_id})) {
      add(out, "sync-highlight", h.id, "highlight-requires-link");
    }
    const auto& ts = h.transcript_span;
    bool transcript_ok = ts.line_index < doc.transcript.size() &&
                         ts.token_start < ts.token_end;
    if (transcript_ok && !seg->line_indices.empty()) {
      transcript_ok = std::find(seg->line_indices.begin(), seg->line_indices.end(),
                                ts.line_index) != seg->line_indices.end();
    }
    if (transcript_ok) {
      transcript_ok = ts.token_end <= span_tokens(doc.transcript[ts.line_index].text).size();
    }
    if (!transcript_ok) add(out, "sync-highlight", h.id, "highlight-span", "transcript span");
    const auto& ps = h.passage_span;
    if (!(ps.token_start < ps.token_end && ps.token_end <= span_tokens(passage->text).size())) {
      add(out, "sync-highlight", h.id, "highlight-span", "passage span");
    }
  }
  return out;
}

PapeoStats papeo_stats(const PapeoDoc& doc) {
  PapeoStats stats;
  stats.num_links = doc.links.size();
  stats.num_sync_highlights = doc.sync_highlights.size();
  if (doc.links.empty()) return stats;
  double passages = 0;
  double length_s = 0;
  std::size_t resolved = 0;
  for (const auto& l : doc.links) {
    passages += static_cast<double>(l.passage_ids.size());
    if (const auto* s = doc.find_segment(l.segment_id)) {
      length_s += to_seconds(s->length());
      ++resolved;
    }
  }
  stats.avg_passages_per_link = passages / static_cast<double>(doc.links.size());
  if (resolved > 0) stats.avg_segment_len_s = length_s / static_cast<double>(resolved);
  return stats;
}

std::vector<std::string> span_tokens(std::string_view text) {
  return text::split_whitespace(text);
}

std::string segment_text(const PapeoDoc& doc, const VideoSegment& segment) {
  std::vector<std::string> parts;
  for (auto li : segment.line_indices) {
    if (li < doc.transcript.size()) parts.push_back(doc.transcript[li].text);
  }
  return text::normalize_whitespace(text::join(parts));
}

}  // namespace papeo
