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

#include <string>
#include <string_view>
#include <vector>

#include "papeo/model.hpp"

namespace papeo::ingest {

enum class TranscriptFormat { srt, vtt };

/// Picks the format from a file name extension (".srt" / ".vtt").
TranscriptFormat format_from_path(std::string_view path);

struct TranscriptParse {
  std::vector<TranscriptLine> lines;
  /// Non-fatal findings such as overlapping cues.
  std::vector<std::string> warnings;
};

/// Reads SRT or WebVTT cues (timing line + text payload). Markup tags are
/// stripped; everything else in the payload is kept verbatim, with payload
/// lines joined by '\n'. Output is sorted by start time and reindexed.
/// Throws ParseError with the 1-based cue number on a malformed timestamp.
TranscriptParse parse_transcript(std::string_view bytes, TranscriptFormat format);

/// Writes lines back out in the given format.
std::string emit_transcript(const std::vector<TranscriptLine>& lines, TranscriptFormat format);

/// Formats a timestamp as "hh:mm:ss.mmm" (VTT) or "hh:mm:ss,mmm" (SRT).
std::string format_timestamp(Millis t, TranscriptFormat format);

/// Parses a layout-analysis JSON file (the PaperDocument schema). Throws
/// ParseError for malformed JSON and SchemaError(path) for schema or
/// invariant failures, including duplicate passage ids.
PaperDocument parse_layout(std::string_view bytes);

inline constexpr std::string_view kDefaultTerminalPunctuation = ".!?";

struct SentenceGroup {
  std::vector<std::size_t> line_indices;
  std::string text;
};

/// True when the line's trimmed text ends with a terminal punctuation mark,
/// optionally followed by closing quotes or brackets.
bool ends_sentence(std::string_view line_text,
                   std::string_view terminal = kDefaultTerminalPunctuation);

/// Partitions lines into sentence groups. Each group ends at the first line
/// that ends a sentence; a trailing unterminated run forms a tail group.
std::vector<SentenceGroup> group_sentences(
    const std::vector<TranscriptLine>& lines,
    std::string_view terminal = kDefaultTerminalPunctuation);

}  // namespace papeo::ingest
