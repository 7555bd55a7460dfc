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

#include "papeo/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "papeo/errors.hpp"
#include "papeo/json_io.hpp"
#include "papeo/segmentation.hpp"

namespace papeo::store {
namespace fs = std::filesystem;

namespace {

void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error("write failed for " + path.string() + ": " + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool valid_id(const std::string& id) {
  return !id.empty() && id.size() <= 64 &&
         std::all_of(id.begin(), id.end(), [](unsigned char c) {
           return std::isalnum(c) || c == '-' || c == '_';
         });
}

}  // namespace

Store::Store(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "papeos");
  fs::create_directories(root_ / "events");
  // Temp files left by an interrupted write are never the live document.
  for (const auto& entry : fs::directory_iterator(root_ / "papeos")) {
    if (entry.path().extension() == ".tmp") fs::remove(entry.path());
  }
}

fs::path Store::doc_path(const std::string& id) const {
  return root_ / "papeos" / (id + ".json");
}

fs::path Store::events_path(const std::string& id) const {
  return root_ / "events" / (id + ".jsonl");
}

std::shared_ptr<std::mutex> Store::doc_mutex(const std::string& id) {
  std::lock_guard lock(registry_mutex_);
  auto& m = doc_mutexes_[id];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

void Store::set_write_hook(std::function<void(WriteStage)> hook) {
  std::lock_guard lock(registry_mutex_);
  write_hook_ = std::move(hook);
}

std::string Store::new_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(registry_mutex_);
  while (true) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    std::string id = std::string("p") + std::string(buf).substr(0, 12);
    if (!doc_mutexes_.contains(id) && !fs::exists(doc_path(id))) {
      doc_mutexes_[id] = std::make_shared<std::mutex>();
      return id;
    }
  }
}

void Store::write_doc(const StoredDoc& stored) {
  Json j;
  j["id"] = stored.id;
  j["revision"] = stored.revision;
  j["papeo"] = to_json(stored.doc);
  const std::string bytes = j.dump(2) + "\n";

  std::function<void(WriteStage)> hook;
  {
    std::lock_guard lock(registry_mutex_);
    hook = write_hook_;
  }
  const fs::path target = doc_path(stored.id);
  fs::path temp = target;
  temp += ".tmp";
  int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error("cannot create " + temp.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, bytes, temp);
    if (hook) hook(WriteStage::temp_written);
    if (::fsync(fd) != 0) throw Error("fsync failed for " + temp.string());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  if (hook) hook(WriteStage::before_rename);
  if (::rename(temp.c_str(), target.c_str()) != 0) {
    throw Error("rename failed for " + target.string() + ": " + std::strerror(errno));
  }
}

StoredDoc Store::create(PapeoDoc doc) {
  auto violations = validate(doc);
  if (!violations.empty()) throw Invalid(std::move(violations));
  StoredDoc stored{new_id(), 1, std::move(doc)};
  auto m = doc_mutex(stored.id);
  std::lock_guard lock(*m);
  write_doc(stored);
  return stored;
}

StoredDoc Store::create_papeo(PaperDocument paper, std::vector<TranscriptLine> transcript,
                              VideoMeta video) {
  PapeoDoc doc;
  doc.paper = std::move(paper);
  doc.transcript = std::move(transcript);
  doc.video = std::move(video);
  return create(std::move(doc));
}

StoredDoc Store::get(const std::string& id) const {
  if (!valid_id(id)) throw NotFound("unknown papeo '" + id + "'");
  auto bytes = read_file(doc_path(id));
  if (!bytes) throw NotFound("unknown papeo '" + id + "'");
  Json j = parse_json(*bytes);
  StoredDoc stored;
  stored.id = j.at("id").get<std::string>();
  stored.revision = j.at("revision").get<long long>();
  stored.doc = doc_from_json(j.at("papeo"));
  return stored;
}

std::vector<DocSummary> Store::list() const {
  std::vector<DocSummary> out;
  for (const auto& entry : fs::directory_iterator(root_ / "papeos")) {
    if (entry.path().extension() != ".json") continue;
    try {
      auto stored = get(entry.path().stem().string());
      out.push_back({stored.id, stored.revision, stored.doc.paper.title});
    } catch (const NotFound&) {
      // Deleted between listing and reading.
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

void Store::remove(const std::string& id) {
  if (!valid_id(id)) throw NotFound("unknown papeo '" + id + "'");
  auto m = doc_mutex(id);
  std::lock_guard lock(*m);
  if (!fs::remove(doc_path(id))) throw NotFound("unknown papeo '" + id + "'");
  fs::remove(events_path(id));
}

StoredDoc Store::mutate(const std::string& id, long long expected_revision,
                        const std::function<void(PapeoDoc&)>& change) {
  if (!valid_id(id)) throw NotFound("unknown papeo '" + id + "'");
  auto m = doc_mutex(id);
  std::lock_guard lock(*m);
  StoredDoc current = get(id);
  if (current.revision != expected_revision) throw Conflict(expected_revision, current.revision);
  change(current.doc);
  auto violations = validate(current.doc);
  if (!violations.empty()) throw Invalid(std::move(violations));
  ++current.revision;
  write_doc(current);
  return current;
}

StoredDoc Store::upsert_segment(const std::string& id, long long expected_revision,
                                VideoSegment segment) {
  if (segment.id.empty()) throw InputError("segment id required");
  return mutate(id, expected_revision, [&](PapeoDoc& doc) {
    if (segment.line_indices.empty()) {
      segment.line_indices = segmentation::lines_in_range(doc.transcript, segment.start,
                                                          segment.end,
                                                          segment.end == doc.video.duration);
    }
    auto it = std::find_if(doc.segments.begin(), doc.segments.end(),
                           [&](const auto& s) { return s.id == segment.id; });
    if (it != doc.segments.end()) {
      *it = segment;
    } else {
      doc.segments.push_back(segment);
    }
    std::stable_sort(doc.segments.begin(), doc.segments.end(),
                     [](const auto& a, const auto& b) { return a.start < b.start; });
  });
}

StoredDoc Store::delete_segment(const std::string& id, long long expected_revision,
                                const std::string& segment_id) {
  return mutate(id, expected_revision, [&](PapeoDoc& doc) {
    auto n = std::erase_if(doc.segments, [&](const auto& s) { return s.id == segment_id; });
    if (n == 0) throw NotFound("unknown segment '" + segment_id + "'");
    std::erase_if(doc.links, [&](const auto& l) { return l.segment_id == segment_id; });
    std::erase_if(doc.sync_highlights,
                  [&](const auto& h) { return h.segment_id == segment_id; });
  });
}

StoredDoc Store::set_link(const std::string& id, long long expected_revision, PassageLink link) {
  return mutate(id, expected_revision, [&](PapeoDoc& doc) {
    auto it = std::find_if(doc.links.begin(), doc.links.end(),
                           [&](const auto& l) { return l.segment_id == link.segment_id; });
    if (it != doc.links.end()) {
      *it = link;
    } else {
      doc.links.push_back(link);
    }
  });
}

StoredDoc Store::clear_link(const std::string& id, long long expected_revision,
                            const std::string& segment_id) {
  return mutate(id, expected_revision, [&](PapeoDoc& doc) {
    auto n = std::erase_if(doc.links, [&](const auto& l) { return l.segment_id == segment_id; });
    if (n == 0) throw NotFound("segment '" + segment_id + "' has no link");
    std::erase_if(doc.sync_highlights,
                  [&](const auto& h) { return h.segment_id == segment_id; });
  });
}

StoredDoc Store::add_sync_highlight(const std::string& id, long long expected_revision,
                                    SyncHighlight highlight) {
  return mutate(id, expected_revision, [&](PapeoDoc& doc) {
    if (highlight.id.empty()) {
      for (std::size_t n = doc.sync_highlights.size() + 1;; ++n) {
        std::string candidate = "h" + std::to_string(n);
        if (std::none_of(doc.sync_highlights.begin(), doc.sync_highlights.end(),
                         [&](const auto& h) { return h.id == candidate; })) {
          highlight.id = candidate;
          break;
        }
      }
    }
    doc.sync_highlights.push_back(highlight);
  });
}

StoredDoc Store::remove_sync_highlight(const std::string& id, long long expected_revision,
                                       const std::string& highlight_id) {
  return mutate(id, expected_revision, [&](PapeoDoc& doc) {
    auto n = std::erase_if(doc.sync_highlights,
                           [&](const auto& h) { return h.id == highlight_id; });
    if (n == 0) throw NotFound("unknown sync highlight '" + highlight_id + "'");
  });
}

std::size_t Store::append_events(const std::string& id,
                                 const std::vector<evaluation::ActionEvent>& events) {
  if (!valid_id(id) || !fs::exists(doc_path(id))) {
    throw NotFound("unknown papeo '" + id + "'");
  }
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].timestamp < events[i - 1].timestamp) {
      throw Invalid({Violation{"event", std::to_string(i), "events-sorted",
                               "batch timestamps must be non-decreasing"}});
    }
  }
  if (events.empty()) return 0;
  std::string bytes;
  for (const auto& e : events) bytes += evaluation::to_json(e).dump() + "\n";

  auto m = doc_mutex(id);
  std::lock_guard lock(*m);
  const fs::path path = events_path(id);
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw Error("cannot open " + path.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, bytes, path);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  return events.size();
}

std::vector<evaluation::ActionEvent> Store::read_events(const std::string& id) const {
  if (!valid_id(id) || !fs::exists(doc_path(id))) {
    throw NotFound("unknown papeo '" + id + "'");
  }
  auto bytes = read_file(events_path(id));
  if (!bytes) return {};
  return evaluation::parse_events(*bytes);
}

}  // namespace papeo::store
