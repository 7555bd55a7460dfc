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

namespace papeo::text {

/// Unicode NFC normalization of UTF-8 input. Invalid sequences are replaced
/// with U+FFFD.
std::string nfc(std::string_view utf8);

/// Splits on Unicode whitespace.
std::vector<std::string> split_whitespace(std::string_view utf8);

/// Linker tokenization: NFC, lowercase, punctuation replaced by whitespace,
/// whitespace split. Deterministic in its input.
std::vector<std::string> tokenize(std::string_view utf8);

std::string trim(std::string_view s);

/// Joins with a single space.
std::string join(const std::vector<std::string>& parts, std::string_view sep = " ");

/// Collapses runs of whitespace to one space and trims.
std::string normalize_whitespace(std::string_view s);

}  // namespace papeo::text
