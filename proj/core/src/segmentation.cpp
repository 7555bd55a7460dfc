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

#include "papeo/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "papeo/errors.hpp"

namespace papeo::segmentation {
namespace {

bool contains_any(std::string_view text, std::string_view set) {
  for (std::size_t i = 0; i < set.size();) {
    std::size_t len = 1;
    auto lead = static_cast<unsigned char>(set[i]);
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    if (text.find(set.substr(i, len)) != std::string_view::npos) return true;
    i += len;
  }
  return false;
}

void check_frames(std::span<const FrameRecord> frames) {
  if (frames.size() < 2) throw InputError("segmentation needs at least 2 frames");
  const auto& first = frames.front().image;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const auto& img = frames[i].image;
    if (img.width != first.width || img.height != first.height) {
      throw InputError("frame " + std::to_string(i) + " dimensions differ from frame 0");
    }
    if (frames[i].timestamp <= frames[i - 1].timestamp) {
      throw InputError("frame " + std::to_string(i) + " timestamp not increasing");
    }
  }
  if (first.pixel_count() == 0) throw InputError("empty frames");
}

bool gate_open(const std::optional<Millis>& last_cut, Millis t, Millis min_segment) {
  return !last_cut || t - *last_cut >= min_segment;
}

double luma(const std::uint8_t* px) { return 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]; }

}  // namespace

std::vector<Millis> segment_by_punctuation(const std::vector<TranscriptLine>& lines,
                                           std::string_view punctuation) {
  std::vector<Millis> out;
  for (const auto& l : lines) {
    if (contains_any(l.text, punctuation)) out.push_back(l.end);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double c = mx - mn;
  double h = 0.0;
  if (c > 0) {
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / c, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / c + 2.0);
    } else {
      h = 60.0 * ((r - g) / c + 4.0);
    }
    if (h < 0) h += 360.0;
  }
  return {h, mx > 0 ? c / mx : 0.0, mx};
}

double hsv_frame_delta(const RgbImage& a, const RgbImage& b) {
  if (a.width != b.width || a.height != b.height) throw InputError("frame dimensions differ");
  const std::size_t n = a.pixel_count();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto* pa = &a.pixels[i * 3];
    const auto* pb = &b.pixels[i * 3];
    Hsv ha = rgb_to_hsv(pa[0], pa[1], pa[2]);
    Hsv hb = rgb_to_hsv(pb[0], pb[1], pb[2]);
    double dh = std::abs(ha.h - hb.h);
    dh = std::min(dh, 360.0 - dh);
    total += dh * (255.0 / 180.0) + std::abs(ha.s - hb.s) * 255.0 + std::abs(ha.v - hb.v) * 255.0;
  }
  return total / (3.0 * static_cast<double>(n));
}

double grayscale_ncc(const RgbImage& a, const RgbImage& b) {
  if (a.width != b.width || a.height != b.height) throw InputError("frame dimensions differ");
  const std::size_t n = a.pixel_count();
  if (n == 0) return 1.0;
  std::vector<double> ga(n), gb(n);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ga[i] = luma(&a.pixels[i * 3]);
    gb[i] = luma(&b.pixels[i * 3]);
    ma += ga[i];
    mb += gb[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ga[i] - ma, db = gb[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  constexpr double kFlat = 1e-9;
  const bool flat_a = va <= kFlat * static_cast<double>(n);
  const bool flat_b = vb <= kFlat * static_cast<double>(n);
  if (flat_a || flat_b) {
    return (flat_a && flat_b && std::abs(ma - mb) < 1e-9) ? 1.0 : 0.0;
  }
  return cov / std::sqrt(va * vb);
}

std::vector<Millis> segment_by_hsv(std::span<const FrameRecord> frames,
                                   const SegmenterConfig& cfg) {
  check_frames(frames);
  std::vector<Millis> cuts;
  std::optional<Millis> last_cut;
  for (std::size_t t = 1; t < frames.size(); ++t) {
    const double delta = hsv_frame_delta(frames[t - 1].image, frames[t].image);
    if (delta > cfg.threshold && gate_open(last_cut, frames[t].timestamp, cfg.min_segment)) {
      cuts.push_back(frames[t].timestamp);
      last_cut = frames[t].timestamp;
    }
  }
  return cuts;
}

std::vector<Millis> segment_by_template(std::span<const FrameRecord> frames,
                                        const SegmenterConfig& cfg) {
  check_frames(frames);
  std::vector<Millis> cuts;
  std::optional<Millis> last_cut;
  std::size_t key = 0;
  for (std::size_t t = 1; t < frames.size(); ++t) {
    const double similarity = grayscale_ncc(frames[key].image, frames[t].image);
    if (similarity < cfg.threshold) {
      if (gate_open(last_cut, frames[t].timestamp, cfg.min_segment)) {
        cuts.push_back(frames[t].timestamp);
        last_cut = frames[t].timestamp;
      }
      key = t;
    }
  }
  return cuts;
}

std::vector<std::size_t> lines_in_range(const std::vector<TranscriptLine>& lines, Millis start,
                                        Millis end, bool closed_end) {
  std::vector<std::size_t> out;
  for (const auto& l : lines) {
    // Twice the midpoint keeps the comparison in integers.
    const auto mid2 = l.start.count() + l.end.count();
    const bool inside = mid2 >= 2 * start.count() &&
                        (mid2 < 2 * end.count() || (closed_end && mid2 == 2 * end.count()));
    if (inside) out.push_back(l.index);
  }
  return out;
}

std::vector<VideoSegment> boundaries_to_segments(std::span<const Millis> boundaries,
                                                 Millis duration,
                                                 const std::vector<TranscriptLine>& lines) {
  if (duration.count() <= 0) throw InputError("video duration must be positive");
  std::vector<Millis> cuts;
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    const Millis b = boundaries[i];
    if (b.count() < 0 || b > duration) {
      throw InputError("boundary " + std::to_string(b.count()) + " ms outside [0, duration]");
    }
    if (i > 0 && b < boundaries[i - 1]) throw InputError("boundaries must be sorted");
    if (b.count() == 0 || b == duration) continue;
    if (!cuts.empty() && cuts.back() == b) continue;
    cuts.push_back(b);
  }
  std::vector<VideoSegment> segments;
  Millis start{0};
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const bool last = i == cuts.size();
    const Millis end = last ? duration : cuts[i];
    segments.push_back({"s" + std::to_string(i + 1), start, end,
                        lines_in_range(lines, start, end, last)});
    start = end;
  }
  return segments;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::punctuation: return "punctuation";
    case Method::hsv: return "hsv";
    case Method::template_match: return "template";
  }
  return "punctuation";
}

Method method_from_string(std::string_view s) {
  if (s == "punctuation") return Method::punctuation;
  if (s == "hsv") return Method::hsv;
  if (s == "template") return Method::template_match;
  throw InputError("unknown segmentation method '" + std::string(s) + "'");
}

}  // namespace papeo::segmentation
