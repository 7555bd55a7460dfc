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

#include "papeo/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <unordered_set>

#include "papeo/errors.hpp"
#include "papeo/json_io.hpp"
#include "papeo/text.hpp"

namespace papeo::ingest {
namespace {

std::vector<std::string> split_lines(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  std::vector<std::string> lines;
  std::string current;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    char c = bytes[i];
    if (c == '\r') {
      if (i + 1 < bytes.size() && bytes[i + 1] == '\n') ++i;
      lines.push_back(std::move(current));
      current.clear();
    } else if (c == '\n') {
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

std::vector<std::vector<std::string>> split_blocks(const std::vector<std::string>& lines) {
  std::vector<std::vector<std::string>> blocks;
  std::vector<std::string> current;
  for (const auto& line : lines) {
    if (text::trim(line).empty()) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(line);
    }
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  return blocks;
}

std::optional<std::int64_t> parse_digits(std::string_view s, std::size_t min_len,
                                         std::size_t max_len) {
  if (s.size() < min_len || s.size() > max_len) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// [hh:]mm:ss(.|,)mmm
std::optional<Millis> parse_timestamp(std::string_view s) {
  auto sep = s.find_last_of(".,");
  if (sep == std::string_view::npos) return std::nullopt;
  auto frac = parse_digits(s.substr(sep + 1), 1, 3);
  if (!frac) return std::nullopt;
  std::int64_t ms = *frac;
  for (std::size_t n = s.size() - sep - 1; n < 3; ++n) ms *= 10;

  std::vector<std::string_view> fields;
  std::string_view clock = s.substr(0, sep);
  std::size_t pos = 0;
  while (true) {
    auto colon = clock.find(':', pos);
    fields.push_back(clock.substr(pos, colon == std::string_view::npos ? colon : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (fields.size() < 2 || fields.size() > 3) return std::nullopt;
  std::int64_t hours = 0;
  if (fields.size() == 3) {
    auto h = parse_digits(fields[0], 1, 4);
    if (!h) return std::nullopt;
    hours = *h;
  }
  auto minutes = parse_digits(fields[fields.size() - 2], 1, 2);
  auto seconds = parse_digits(fields.back(), 2, 2);
  if (!minutes || !seconds || *minutes >= 60 || *seconds >= 60) return std::nullopt;
  return Millis{((hours * 60 + *minutes) * 60 + *seconds) * 1000 + ms};
}

std::string strip_tags(std::string_view s) {
  std::string out;
  bool in_tag = false;
  for (char c : s) {
    if (in_tag) {
      if (c == '>') in_tag = false;
    } else if (c == '<') {
      in_tag = true;
    } else {
      out += c;
    }
  }
  return out;
}

struct Timing {
  Millis start;
  Millis end;
};

Timing parse_timing(std::string_view line, std::size_t cue_number) {
  auto arrow = line.find("-->");
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("cue " + std::to_string(cue_number) + ": " + why, cue_number,
                      ParseError::Unit::cue);
  };
  if (arrow == std::string_view::npos) throw fail("missing '-->' timing line");
  std::string lhs = text::trim(line.substr(0, arrow));
  std::string rest = text::trim(line.substr(arrow + 3));
  // Cue settings follow the end timestamp after whitespace.
  auto ws = rest.find_first_of(" \t");
  std::string rhs = ws == std::string::npos ? rest : rest.substr(0, ws);
  auto start = parse_timestamp(lhs);
  auto end = parse_timestamp(rhs);
  if (!start) throw fail("malformed start timestamp '" + lhs + "'");
  if (!end) throw fail("malformed end timestamp '" + rhs + "'");
  if (*end <= *start) throw fail("cue end is not after its start");
  return {*start, *end};
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

TranscriptFormat format_from_path(std::string_view path) {
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string_view::npos ? "" : std::string(path.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "srt") return TranscriptFormat::srt;
  if (ext == "vtt") return TranscriptFormat::vtt;
  throw InputError("cannot infer transcript format from '" + std::string(path) + "'");
}

TranscriptParse parse_transcript(std::string_view bytes, TranscriptFormat format) {
  auto blocks = split_blocks(split_lines(bytes));
  std::size_t first = 0;
  if (format == TranscriptFormat::vtt) {
    if (blocks.empty() || !starts_with(blocks[0][0], "WEBVTT")) {
      throw ParseError("missing WEBVTT header", 0, ParseError::Unit::cue);
    }
    first = 1;
  }

  TranscriptParse result;
  std::size_t cue_number = 0;
  for (std::size_t b = first; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (format == TranscriptFormat::vtt &&
        (starts_with(block[0], "NOTE") || starts_with(block[0], "STYLE") ||
         starts_with(block[0], "REGION"))) {
      continue;
    }
    ++cue_number;
    // Optional identifier (VTT) or sequence number (SRT) before the timing line.
    std::size_t timing_line = block[0].find("-->") != std::string::npos ? 0 : 1;
    if (timing_line >= block.size()) {
      throw ParseError("cue " + std::to_string(cue_number) + ": missing timing line",
                       cue_number, ParseError::Unit::cue);
    }
    Timing timing = parse_timing(block[timing_line], cue_number);
    std::vector<std::string> payload;
    for (std::size_t i = timing_line + 1; i < block.size(); ++i) {
      payload.push_back(strip_tags(block[i]));
    }
    result.lines.push_back({0, timing.start, timing.end, text::join(payload, "\n")});
  }

  std::stable_sort(result.lines.begin(), result.lines.end(),
                   [](const auto& a, const auto& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < result.lines.size(); ++i) {
    result.lines[i].index = i;
    if (i > 0 && result.lines[i].start < result.lines[i - 1].end) {
      result.warnings.push_back("line " + std::to_string(i) + " overlaps line " +
                                std::to_string(i - 1));
    }
  }
  return result;
}

std::string format_timestamp(Millis t, TranscriptFormat format) {
  auto ms = t.count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld%c%03lld",
                static_cast<long long>(ms / 3600000), static_cast<long long>(ms / 60000 % 60),
                static_cast<long long>(ms / 1000 % 60),
                format == TranscriptFormat::srt ? ',' : '.', static_cast<long long>(ms % 1000));
  return buf;
}

std::string emit_transcript(const std::vector<TranscriptLine>& lines, TranscriptFormat format) {
  std::string out;
  if (format == TranscriptFormat::vtt) out += "WEBVTT\n\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (format == TranscriptFormat::srt) out += std::to_string(i + 1) + "\n";
    out += format_timestamp(lines[i].start, format) + " --> " +
           format_timestamp(lines[i].end, format) + "\n";
    out += lines[i].text + "\n\n";
  }
  return out;
}

PaperDocument parse_layout(std::string_view bytes) {
  PaperDocument paper = paper_from_json(parse_json(bytes));
  if (paper.passages.empty()) throw SchemaError("/passages", "at least one passage required");
  std::unordered_set<std::string> ids;
  int last_page = 1;
  for (std::size_t i = 0; i < paper.passages.size(); ++i) {
    const auto& p = paper.passages[i];
    const std::string path = "/passages/" + std::to_string(i);
    if (p.id.empty()) throw SchemaError(path + "/id", "empty passage id");
    if (!ids.insert(p.id).second) {
      throw SchemaError(path + "/id", "duplicate passage id '" + p.id + "'");
    }
    if (p.page < 1) throw SchemaError(path + "/page", "page must be >= 1");
    if (p.page < last_page) throw SchemaError(path + "/page", "passages out of page order");
    last_page = p.page;
    if (!(p.bbox.w >= 0) || !(p.bbox.h >= 0)) {
      throw SchemaError(path + "/bbox", "negative width or height");
    }
    if (p.kind == PassageKind::paragraph && text::trim(p.text).empty()) {
      throw SchemaError(path + "/text", "paragraph without text");
    }
  }
  return paper;
}

bool ends_sentence(std::string_view line_text, std::string_view terminal) {
  static constexpr std::string_view kClosers[] = {
      "\"", "'", ")", "]", "}", "\xE2\x80\x9D" /* ” */, "\xE2\x80\x99" /* ’ */,
      "\xC2\xBB" /* » */};
  std::string s = text::trim(line_text);
  std::string_view view = s;
  for (bool stripped = true; stripped && !view.empty();) {
    stripped = false;
    for (auto closer : kClosers) {
      if (view.ends_with(closer)) {
        view.remove_suffix(closer.size());
        stripped = true;
      }
    }
  }
  // `terminal` may hold multi-byte code points; compare UTF-8 sequences.
  for (std::size_t i = 0; i < terminal.size();) {
    std::size_t len = 1;
    auto lead = static_cast<unsigned char>(terminal[i]);
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    if (view.ends_with(terminal.substr(i, len))) return true;
    i += len;
  }
  return false;
}

std::vector<SentenceGroup> group_sentences(const std::vector<TranscriptLine>& lines,
                                           std::string_view terminal) {
  std::vector<SentenceGroup> groups;
  SentenceGroup current;
  std::vector<std::string> parts;
  auto flush = [&] {
    current.text = text::normalize_whitespace(text::join(parts));
    groups.push_back(std::move(current));
    current = {};
    parts.clear();
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    current.line_indices.push_back(lines[i].index);
    parts.push_back(lines[i].text);
    if (ends_sentence(lines[i].text, terminal)) flush();
  }
  if (!current.line_indices.empty()) flush();
  return groups;
}

}  // namespace papeo::ingest
