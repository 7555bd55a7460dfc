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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace papeo {

/// All times are integer milliseconds, so `papeo.json` round-trips exactly.
using Millis = std::chrono::milliseconds;

inline double to_seconds(Millis t) { return static_cast<double>(t.count()) / 1000.0; }
inline Millis from_seconds(double s) {
  return Millis{static_cast<std::int64_t>(s * 1000.0 + (s >= 0 ? 0.5 : -0.5))};
}

inline constexpr std::string_view kSchemaVersion = "papeo/1";

enum class PassageKind { paragraph, figure, table, caption, heading };

std::string_view to_string(PassageKind kind);
std::optional<PassageKind> passage_kind_from_string(std::string_view s);

struct BBox {
  double x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Passage {
  std::string id;
  PassageKind kind = PassageKind::paragraph;
  std::vector<std::string> section_path;
  int page = 1;
  BBox bbox;
  std::string text;
  friend bool operator==(const Passage&, const Passage&) = default;
};

struct PaperDocument {
  std::string paper_id;
  std::string title;
  std::vector<Passage> passages;  // reading order
  std::string source;

  const Passage* find(std::string_view passage_id) const;
  std::optional<std::size_t> index_of(std::string_view passage_id) const;
  friend bool operator==(const PaperDocument&, const PaperDocument&) = default;
};

struct TranscriptLine {
  std::size_t index = 0;
  Millis start{0};
  Millis end{0};
  std::string text;
  friend bool operator==(const TranscriptLine&, const TranscriptLine&) = default;
};

struct VideoSegment {
  std::string id;
  Millis start{0};
  Millis end{0};
  std::vector<std::size_t> line_indices;  // contiguous
  Millis length() const { return end - start; }
  friend bool operator==(const VideoSegment&, const VideoSegment&) = default;
};

struct PassageLink {
  std::string segment_id;
  std::vector<std::string> passage_ids;
  friend bool operator==(const PassageLink&, const PassageLink&) = default;
};

struct TranscriptSpan {
  std::size_t line_index = 0;
  std::size_t token_start = 0;
  std::size_t token_end = 0;  // exclusive
  friend bool operator==(const TranscriptSpan&, const TranscriptSpan&) = default;
};

struct TokenSpan {
  std::size_t token_start = 0;
  std::size_t token_end = 0;  // exclusive
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct SyncHighlight {
  std::string id;
  std::string segment_id;
  std::string passage_id;
  TranscriptSpan transcript_span;
  TokenSpan passage_span;
  friend bool operator==(const SyncHighlight&, const SyncHighlight&) = default;
};

struct VideoMeta {
  std::string uri;
  Millis duration{0};
  std::optional<double> frame_rate;
  friend bool operator==(const VideoMeta&, const VideoMeta&) = default;
};

struct PapeoDoc {
  std::string schema_version{kSchemaVersion};
  PaperDocument paper;
  VideoMeta video;
  std::vector<TranscriptLine> transcript;
  std::vector<VideoSegment> segments;  // sorted, disjoint
  std::vector<PassageLink> links;
  std::vector<SyncHighlight> sync_highlights;

  const VideoSegment* find_segment(std::string_view segment_id) const;
  const PassageLink* find_link(std::string_view segment_id) const;
  friend bool operator==(const PapeoDoc&, const PapeoDoc&) = default;
};

/// One broken invariant. `type` names the offending record kind, `id` its
/// identifier (or index), `rule` a stable kebab-case rule name.
struct Violation {
  std::string type;
  std::string id;
  std::string rule;
  std::string detail;
  friend bool operator==(const Violation& a, const Violation& b) {
    return a.type == b.type && a.id == b.id && a.rule == b.rule;
  }
};

/// Checks every model invariant. Pure and total; an empty result means the
/// document is valid.
std::vector<Violation> validate(const PapeoDoc& doc);

/// Invariants of a parsed paper on its own (used by the layout reader).
std::vector<Violation> validate_paper(const PaperDocument& paper);

/// Invariants of a transcript on its own.
std::vector<Violation> validate_transcript(const std::vector<TranscriptLine>& lines);

struct PapeoStats {
  std::size_t num_links = 0;
  std::optional<double> avg_passages_per_link;
  std::optional<double> avg_segment_len_s;  // over linked segments
  std::size_t num_sync_highlights = 0;
};

PapeoStats papeo_stats(const PapeoDoc& doc);

/// Whitespace tokens of `text` after NFC normalization. Token spans in
/// SyncHighlight index into this list.
std::vector<std::string> span_tokens(std::string_view text);

/// Concatenated text of the transcript lines a segment covers.
std::string segment_text(const PapeoDoc& doc, const VideoSegment& segment);

}  // namespace papeo
