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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "papeo/image.hpp"
#include "papeo/ingest.hpp"
#include "papeo/model.hpp"

namespace papeo::segmentation {

struct SegmenterConfig {
  Millis min_segment{0};
  /// HSV: mean absolute channel difference in [0,255] that must be exceeded.
  /// Template: NCC similarity below which a cut is declared, in [-1,1].
  double threshold = 0.0;
  std::string punctuation_set{ingest::kDefaultTerminalPunctuation};
};

/// One boundary at the end of every line whose text contains a terminal
/// punctuation character anywhere. Sorted, deduplicated.
std::vector<Millis> segment_by_punctuation(
    const std::vector<TranscriptLine>& lines,
    std::string_view punctuation = ingest::kDefaultTerminalPunctuation);

struct Hsv {
  double h;  // degrees [0, 360)
  double s;  // [0, 1]
  double v;  // [0, 1]
};

/// Hexcone RGB -> HSV.
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Mean absolute per-pixel difference over H, S and V, each scaled to
/// [0,255]; hue uses the circular distance min(|dh|, 360-|dh|).
double hsv_frame_delta(const RgbImage& a, const RgbImage& b);

/// Normalized cross-correlation of the grayscale (BT.601 luma) frames over
/// the full frame. Flat frames: 1 when both are flat with equal gray level,
/// 0 otherwise.
double grayscale_ncc(const RgbImage& a, const RgbImage& b);

/// Cut at frame t when its HSV delta to frame t-1 exceeds cfg.threshold and
/// at least cfg.min_segment has elapsed since the previous emitted cut.
/// Requires >= 2 frames of uniform dimensions (InputError otherwise).
std::vector<Millis> segment_by_hsv(std::span<const FrameRecord> frames,
                                   const SegmenterConfig& cfg);

/// Compares each frame against the current key frame (initially frame 0).
/// Similarity below cfg.threshold is a detection; it is emitted when the
/// min-length gate allows, and the key frame moves to the detecting frame
/// either way.
std::vector<Millis> segment_by_template(std::span<const FrameRecord> frames,
                                        const SegmenterConfig& cfg);

/// Splits [0, duration] at the boundaries. Boundaries at 0 or at duration
/// are dropped as redundant, duplicates collapse. Each segment receives the
/// lines whose midpoint falls inside it. Segment ids are "s1", "s2", ...
std::vector<VideoSegment> boundaries_to_segments(std::span<const Millis> boundaries,
                                                 Millis duration,
                                                 const std::vector<TranscriptLine>& lines);

/// Lines whose midpoint lies in [start, end); the final segment of a video
/// also takes lines ending exactly at `end`.
std::vector<std::size_t> lines_in_range(const std::vector<TranscriptLine>& lines, Millis start,
                                        Millis end, bool closed_end = false);

enum class Method { punctuation, hsv, template_match };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

}  // namespace papeo::segmentation
