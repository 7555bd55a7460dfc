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

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "papeo/model.hpp"

namespace papeo {

/// 8-bit interleaved RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  RgbImage() = default;
  RgbImage(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::uint8_t* at(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* at(int x, int y) const {
    return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
  }
  void fill_rect(int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Binary PPM (P6, maxval 255).
RgbImage read_ppm(std::string_view bytes);
std::string write_ppm(const RgbImage& image);

/// PNG via libpng; any color type is converted to 8-bit RGB.
RgbImage read_png(const std::filesystem::path& path);

/// Loads a .ppm or .png file by extension.
RgbImage read_image(const std::filesystem::path& path);

struct FrameRecord {
  Millis timestamp{0};
  RgbImage image;
};

/// Reads a JSON-lines manifest of `{timestamp_ms, path}` records. Relative
/// paths resolve against the manifest's directory. Enforces strictly
/// increasing timestamps and uniform dimensions (InputError otherwise).
std::vector<FrameRecord> load_frames_manifest(const std::filesystem::path& manifest);

/// Writes frames as PPM files next to a fresh manifest.
void write_frames_manifest(const std::filesystem::path& manifest,
                           const std::vector<FrameRecord>& frames);

}  // namespace papeo
