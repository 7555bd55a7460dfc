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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "papeo/interactions.hpp"
#include "papeo/model.hpp"

namespace papeo::store {

struct StoredDoc {
  std::string id;
  long long revision = 0;
  PapeoDoc doc;
};

struct DocSummary {
  std::string id;
  long long revision = 0;
  std::string title;
};

/// Points in a document write where a fault hook may fire.
enum class WriteStage { temp_written, before_rename };

/// File-backed Papeo store.
///
/// Layout under the root: `papeos/<id>.json` holds `{id, revision, papeo}`,
/// `events/<id>.jsonl` the appended interaction log. Every document write
/// goes to a temp file that is fsynced and renamed over the target, so a
/// reader sees either the previous or the new revision in full. Writes to
/// one document are serialized; reads take no locks.
///
/// Mutations take the revision the caller last saw and fail with Conflict
/// when it is stale, so of two writers racing from the same base revision
/// exactly one succeeds. A mutation that would leave the document invalid
/// throws Invalid and changes nothing.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  /// Validates and stores a new document at revision 1.
  StoredDoc create(PapeoDoc doc);
  StoredDoc create_papeo(PaperDocument paper, std::vector<TranscriptLine> transcript,
                         VideoMeta video);

  StoredDoc get(const std::string& id) const;
  std::vector<DocSummary> list() const;
  void remove(const std::string& id);

  /// Inserts or replaces a segment by id. Empty line_indices are filled with
  /// the lines whose midpoint lies in the segment.
  StoredDoc upsert_segment(const std::string& id, long long expected_revision,
                           VideoSegment segment);
  /// Also drops the segment's link and sync highlights.
  StoredDoc delete_segment(const std::string& id, long long expected_revision,
                           const std::string& segment_id);
  StoredDoc set_link(const std::string& id, long long expected_revision, PassageLink link);
  /// Also drops the segment's sync highlights.
  StoredDoc clear_link(const std::string& id, long long expected_revision,
                       const std::string& segment_id);
  /// An empty highlight id is assigned ("h1", "h2", ...).
  StoredDoc add_sync_highlight(const std::string& id, long long expected_revision,
                               SyncHighlight highlight);
  StoredDoc remove_sync_highlight(const std::string& id, long long expected_revision,
                                  const std::string& highlight_id);

  /// Appends a sorted batch to the document's event log; returns the count.
  /// Does not bump the revision. Invalid when the batch is unsorted.
  std::size_t append_events(const std::string& id,
                            const std::vector<evaluation::ActionEvent>& events);
  std::vector<evaluation::ActionEvent> read_events(const std::string& id) const;

  /// Test hook: called at each WriteStage; throwing aborts the write there.
  void set_write_hook(std::function<void(WriteStage)> hook);

 private:
  std::filesystem::path doc_path(const std::string& id) const;
  std::filesystem::path events_path(const std::string& id) const;
  std::shared_ptr<std::mutex> doc_mutex(const std::string& id);
  void write_doc(const StoredDoc& stored);
  StoredDoc mutate(const std::string& id, long long expected_revision,
                   const std::function<void(PapeoDoc&)>& change);
  std::string new_id();

  std::filesystem::path root_;
  mutable std::mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> doc_mutexes_;
  std::function<void(WriteStage)> write_hook_;
};

}  // namespace papeo::store
