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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace papeo {

struct Violation;

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed bytes. `location` is a byte offset for JSON input and a 1-based
/// cue number for transcripts (see `unit`).
class ParseError : public Error {
 public:
  enum class Unit { byte, cue };

  ParseError(const std::string& what, std::size_t location, Unit unit)
      : Error(what), location_(location), unit_(unit) {}

  std::size_t location() const noexcept { return location_; }
  Unit unit() const noexcept { return unit_; }

 private:
  std::size_t location_;
  Unit unit_;
};

class VersionError : public Error {
 public:
  explicit VersionError(const std::string& version)
      : Error("unsupported schema_version '" + version + "'"),
        version_(version) {}
  const std::string& version() const noexcept { return version_; }

 private:
  std::string version_;
};

/// Structurally valid JSON that does not match the expected schema.
/// `path` is a JSON pointer to the offending value.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class EmbedError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class Conflict : public Error {
 public:
  Conflict(long long expected, long long actual)
      : Error("revision conflict: expected " + std::to_string(expected) +
              ", current " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}
  long long expected() const noexcept { return expected_; }
  long long actual() const noexcept { return actual_; }

 private:
  long long expected_;
  long long actual_;
};

/// A document failed validation; carries the full violation list.
class Invalid : public Error {
 public:
  explicit Invalid(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<Violation> violations_;
};

}  // namespace papeo
