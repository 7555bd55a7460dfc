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

#include "papeo/image.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "papeo/errors.hpp"
#include "papeo/json_io.hpp"

namespace papeo {

RgbImage::RgbImage(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
  fill_rect(0, 0, w, h, r, g, b);
}

void RgbImage::fill_rect(int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b) {
  for (int y = std::max(0, y0); y < std::min(height, y1); ++y) {
    for (int x = std::max(0, x0); x < std::min(width, x1); ++x) {
      auto* px = at(x, y);
      px[0] = r;
      px[1] = g;
      px[2] = b;
    }
  }
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Next whitespace-delimited PPM header token, skipping '#' comments.
std::string_view header_token(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  return bytes.substr(start, pos - start);
}

int header_int(std::string_view bytes, std::size_t& pos) {
  auto tok = header_token(bytes, pos);
  if (tok.empty()) throw InputError("truncated PPM header");
  int value = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("bad PPM header");
    value = value * 10 + (c - '0');
    if (value > (1 << 24)) throw InputError("PPM dimension too large");
  }
  return value;
}

}  // namespace

RgbImage read_ppm(std::string_view bytes) {
  std::size_t pos = 0;
  if (header_token(bytes, pos) != "P6") throw InputError("not a binary PPM (P6)");
  int w = header_int(bytes, pos);
  int h = header_int(bytes, pos);
  int maxval = header_int(bytes, pos);
  if (maxval != 255) throw InputError("only 8-bit PPM is supported");
  ++pos;  // single whitespace after maxval
  RgbImage img;
  img.width = w;
  img.height = h;
  std::size_t need = img.pixel_count() * 3;
  if (bytes.size() < pos + need) throw InputError("truncated PPM pixel data");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

std::string write_ppm(const RgbImage& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

RgbImage read_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  const std::string name = path.string();
  if (!png_image_begin_read_from_file(&png, name.c_str())) {
    throw InputError("cannot read PNG " + name + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  RgbImage img;
  img.width = static_cast<int>(png.width);
  img.height = static_cast<int>(png.height);
  img.pixels.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw InputError("cannot decode PNG " + name + ": " + msg);
  }
  return img;
}

RgbImage read_image(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return read_png(path);
  if (ext == ".ppm") return read_ppm(read_file(path));
  throw InputError("unsupported image format: " + path.string());
}

std::vector<FrameRecord> load_frames_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw InputError("cannot open frames manifest " + manifest.string());
  const auto base = manifest.parent_path();
  std::vector<FrameRecord> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = parse_json(line);
    if (!j.is_object() || !j.contains("timestamp_ms") || !j["timestamp_ms"].is_number_integer() ||
        !j.contains("path") || !j["path"].is_string()) {
      throw InputError("frames manifest line " + std::to_string(line_no) +
                       ": expected {timestamp_ms, path}");
    }
    std::filesystem::path p = j["path"].get<std::string>();
    if (p.is_relative()) p = base / p;
    FrameRecord rec{Millis{j["timestamp_ms"].get<std::int64_t>()}, read_image(p)};
    if (!frames.empty()) {
      if (rec.timestamp <= frames.back().timestamp) {
        throw InputError("frames manifest line " + std::to_string(line_no) +
                         ": timestamps must be strictly increasing");
      }
      if (rec.image.width != frames.front().image.width ||
          rec.image.height != frames.front().image.height) {
        throw InputError("frames manifest line " + std::to_string(line_no) +
                         ": frame dimensions differ");
      }
    }
    frames.push_back(std::move(rec));
  }
  return frames;
}

void write_frames_manifest(const std::filesystem::path& manifest,
                           const std::vector<FrameRecord>& frames) {
  const auto base = manifest.parent_path();
  std::error_code ec;
  if (!base.empty()) std::filesystem::create_directories(base, ec);
  std::ofstream out(manifest);
  if (!out) throw InputError("cannot write " + manifest.string());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%05zu.ppm", i);
    std::ofstream img(base / name, std::ios::binary);
    img << write_ppm(frames[i].image);
    Json j;
    j["timestamp_ms"] = frames[i].timestamp.count();
    j["path"] = name;
    out << j.dump() << "\n";
  }
}

}  // namespace papeo
