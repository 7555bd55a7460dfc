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

#include <doctest.h>

#include <fstream>

#include "papeo/errors.hpp"
#include "papeo/image.hpp"
#include "test_server.hpp"

using namespace papeo;
using papeo::testing::TempDir;

namespace {

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

// 2x1 RGBA: opaque red, half-transparent blue.
const unsigned char kRgbaPng[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x08, 0x06, 0x00, 0x00, 0x00, 0xf4,
    0x22, 0x7f, 0x8a, 0x00, 0x00, 0x00, 0x0e, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8,
    0xcf, 0xc0, 0x00, 0x42, 0x0d, 0x00, 0x0f, 0x7a, 0x03, 0x7e, 0x77, 0xe9, 0x7f, 0x97, 0x00,
    0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x1 8-bit gray: 10, 200.
const unsigned char kGrayPng[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00, 0x00, 0x00, 0x00, 0xd1,
    0x49, 0x20, 0x56, 0x00, 0x00, 0x00, 0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0xe0,
    0x3a, 0x01, 0x00, 0x00, 0xdf, 0x00, 0xd3, 0x4b, 0x21, 0xa5, 0x49, 0x00, 0x00, 0x00, 0x00,
    0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

template <std::size_t N>
std::string as_string(const unsigned char (&a)[N]) {
  return std::string(reinterpret_cast<const char*>(a), N);
}

}  // namespace

TEST_CASE("solid constructor and fill_rect") {
  RgbImage img(4, 3, 1, 2, 3);
  CHECK(img.pixels.size() == 36);
  img.fill_rect(1, 1, 3, 2, 9, 9, 9);
  CHECK(img.at(0, 0)[2] == 3);
  CHECK(img.at(1, 1)[0] == 9);
  CHECK(img.at(2, 1)[0] == 9);
  CHECK(img.at(3, 1)[0] == 1);
  CHECK(img.at(1, 2)[0] == 1);
}

TEST_CASE("ppm round-trip") {
  RgbImage img(3, 2, 10, 20, 30);
  img.at(2, 1)[1] = 250;
  CHECK(read_ppm(write_ppm(img)) == img);
}

TEST_CASE("ppm header with comment") {
  const std::string bytes = std::string("P6\n# made by hand\n1 1\n255\n") + "\x01\x02\x03";
  const auto img = read_ppm(bytes);
  CHECK(img.width == 1);
  CHECK(img.at(0, 0)[2] == 3);
}

TEST_CASE("ppm errors") {
  CHECK_THROWS_AS((void)read_ppm("P3\n1 1\n255\n1 2 3"), InputError);
  CHECK_THROWS_AS((void)read_ppm("P6\n2 2\n255\n\x01\x02"), InputError);
  CHECK_THROWS_AS((void)read_ppm("P6\n1 1\n65535\n\x01\x02\x03\x04\x05\x06"), InputError);
  CHECK_THROWS_AS((void)read_ppm("P6\n1"), InputError);
}

TEST_CASE("png decode converts to rgb") {
  TempDir dir;
  write_bytes(dir.path() / "rgba.png", as_string(kRgbaPng));
  write_bytes(dir.path() / "gray.png", as_string(kGrayPng));
  const auto rgba = read_image(dir.path() / "rgba.png");
  REQUIRE(rgba.width == 2);
  REQUIRE(rgba.height == 1);
  CHECK(rgba.at(0, 0)[0] == 255);
  CHECK(rgba.at(0, 0)[1] == 0);
  const auto gray = read_image(dir.path() / "gray.png");
  CHECK(gray.at(0, 0)[0] == 10);
  CHECK(gray.at(1, 0)[1] == 200);
  CHECK(gray.at(1, 0)[2] == 200);

  write_bytes(dir.path() / "broken.png", as_string(kGrayPng).substr(0, 40));
  CHECK_THROWS_AS((void)read_image(dir.path() / "broken.png"), InputError);
  CHECK_THROWS_AS((void)read_image(dir.path() / "frame.bmp"), InputError);
}

TEST_CASE("frames manifest round-trip") {
  TempDir dir;
  std::vector<FrameRecord> frames{{Millis{0}, RgbImage(4, 4, 255, 0, 0)},
                                  {Millis{1000}, RgbImage(4, 4, 0, 255, 0)}};
  const auto manifest = dir.path() / "frames" / "manifest.jsonl";
  write_frames_manifest(manifest, frames);
  const auto back = load_frames_manifest(manifest);
  REQUIRE(back.size() == 2);
  CHECK(back[1].timestamp == Millis{1000});
  CHECK(back[1].image == frames[1].image);
}

TEST_CASE("frames manifest checks") {
  TempDir dir;
  std::ofstream(dir.path() / "a.ppm", std::ios::binary) << write_ppm(RgbImage(2, 2));
  std::ofstream(dir.path() / "b.ppm", std::ios::binary) << write_ppm(RgbImage(3, 2));
  auto write_manifest = [&](const std::string& body) {
    write_bytes(dir.path() / "m.jsonl", body);
    return dir.path() / "m.jsonl";
  };
  CHECK_THROWS_AS((void)load_frames_manifest(write_manifest(
                      "{\"timestamp_ms\": 5, \"path\": \"a.ppm\"}\n"
                      "{\"timestamp_ms\": 5, \"path\": \"a.ppm\"}\n")),
                  InputError);
  CHECK_THROWS_AS((void)load_frames_manifest(write_manifest(
                      "{\"timestamp_ms\": 0, \"path\": \"a.ppm\"}\n"
                      "{\"timestamp_ms\": 5, \"path\": \"b.ppm\"}\n")),
                  InputError);
  CHECK_THROWS_AS((void)load_frames_manifest(write_manifest("{\"t\": 0}\n")), InputError);
  CHECK_THROWS_AS((void)load_frames_manifest(dir.path() / "missing.jsonl"), InputError);
}
