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

#include <atomic>
#include <thread>

#include "papeo/errors.hpp"
#include "papeo/store.hpp"
#include "synthetic.hpp"
#include "test_server.hpp"

using namespace papeo;
using namespace papeo::store;
using papeo::testing::TempDir;
using papeo::testing::tiny_doc;

namespace {

evaluation::ActionEvent ev(long t, const char* kind) {
  evaluation::ActionEvent e;
  e.timestamp = Millis{t};
  e.actor = "reader";
  e.kind = kind;
  return e;
}

PapeoDoc bare_doc() {
  auto doc = tiny_doc();
  doc.segments.clear();
  doc.links.clear();
  doc.sync_highlights.clear();
  return doc;
}

}  // namespace

TEST_CASE("create, get, list, remove") {
  TempDir dir;
  Store store(dir.path());
  const auto a = store.create(tiny_doc());
  const auto b = store.create_papeo(tiny_doc().paper, tiny_doc().transcript, tiny_doc().video);
  CHECK(a.revision == 1);
  CHECK(a.id != b.id);
  CHECK(store.get(a.id).doc == tiny_doc());
  CHECK(store.get(b.id).doc.segments.empty());
  CHECK(store.list().size() == 2);
  CHECK(store.list()[0].title == "Tiny paper");

  store.remove(a.id);
  CHECK_THROWS_AS((void)store.get(a.id), NotFound);
  CHECK_THROWS_AS(store.remove(a.id), NotFound);
  CHECK_THROWS_AS((void)store.get("../etc/passwd"), NotFound);
}

TEST_CASE("invalid documents are rejected") {
  TempDir dir;
  Store store(dir.path());
  auto doc = tiny_doc();
  doc.links[0].passage_ids = {"nope"};
  CHECK_THROWS_AS((void)store.create(doc), Invalid);
  CHECK(store.list().empty());
}

TEST_CASE("documents survive a restart") {
  TempDir dir;
  std::string id;
  {
    Store store(dir.path());
    id = store.create(tiny_doc()).id;
  }
  Store again(dir.path());
  CHECK(again.get(id).doc == tiny_doc());
}

TEST_CASE("segment upsert fills lines and bumps the revision") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(bare_doc()).id;
  auto r = store.upsert_segment(id, 1, {"b", Millis{9000}, Millis{20000}, {}});
  CHECK(r.revision == 2);
  CHECK(r.doc.segments[0].line_indices == std::vector<std::size_t>{2, 3});
  r = store.upsert_segment(id, 2, {"a", Millis{0}, Millis{9000}, {}});
  REQUIRE(r.doc.segments.size() == 2);
  CHECK(r.doc.segments[0].id == "a");
  r = store.upsert_segment(id, 3, {"a", Millis{0}, Millis{4000}, {}});
  CHECK(r.doc.segments[0].end == Millis{4000});
  CHECK(r.revision == 4);
}

TEST_CASE("invalid mutations change nothing") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(tiny_doc()).id;
  CHECK_THROWS_AS((void)store.upsert_segment(id, 1, {"s3", Millis{5000}, Millis{12000}, {}}),
                  Invalid);
  CHECK_THROWS_AS((void)store.set_link(id, 1, {"s1", {"p404"}}), Invalid);
  CHECK_THROWS_AS((void)store.set_link(id, 1, {"s404", {"p1"}}), Invalid);
  CHECK_THROWS_AS((void)store.upsert_segment(id, 1, {"", Millis{0}, Millis{1}, {}}), InputError);
  CHECK(store.get(id).revision == 1);
  CHECK(store.get(id).doc == tiny_doc());
}

TEST_CASE("stale revisions conflict") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(tiny_doc()).id;
  (void)store.set_link(id, 1, {"s1", {"p1", "p2"}});
  try {
    (void)store.set_link(id, 1, {"s1", {"p2"}});
    FAIL("expected Conflict");
  } catch (const Conflict& c) {
    CHECK(c.expected() == 1);
    CHECK(c.actual() == 2);
  }
  CHECK_THROWS_AS((void)store.set_link("nope", 1, {"s1", {"p2"}}), NotFound);
}

TEST_CASE("two writers from one base: exactly one wins") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(tiny_doc()).id;
  for (int round = 0; round < 20; ++round) {
    const long long base = store.get(id).revision;
    std::atomic<int> wins{0}, conflicts{0};
    auto writer = [&](const char* passage) {
      try {
        (void)store.set_link(id, base, {"s2", {passage}});
        ++wins;
      } catch (const Conflict&) {
        ++conflicts;
      }
    };
    std::thread t1(writer, "p1"), t2(writer, "p2");
    t1.join();
    t2.join();
    CHECK(wins == 1);
    CHECK(conflicts == 1);
    CHECK(store.get(id).revision == base + 1);
  }
}

TEST_CASE("deleting a segment drops its link and highlights") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(tiny_doc()).id;
  const auto r = store.delete_segment(id, 1, "s1");
  CHECK(r.doc.segments.size() == 1);
  CHECK(r.doc.links.size() == 1);
  CHECK(r.doc.sync_highlights.empty());
  CHECK_THROWS_AS((void)store.delete_segment(id, 2, "s1"), NotFound);
}

TEST_CASE("clearing a link drops its highlights") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(tiny_doc()).id;
  const auto r = store.clear_link(id, 1, "s1");
  CHECK(r.doc.links.size() == 1);
  CHECK(r.doc.sync_highlights.empty());
  CHECK_THROWS_AS((void)store.clear_link(id, 2, "s1"), NotFound);
}

TEST_CASE("highlights get ids and need a link") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(tiny_doc()).id;
  auto r = store.add_sync_highlight(id, 1, {"", "s2", "p2", {2, 0, 2}, {0, 2}});
  CHECK(r.doc.sync_highlights.back().id == "h2");
  CHECK_THROWS_AS((void)store.add_sync_highlight(id, 2, {"", "s2", "p1", {2, 0, 2}, {0, 2}}),
                  Invalid);
  r = store.remove_sync_highlight(id, 2, "h-1");
  CHECK(r.doc.sync_highlights.size() == 1);
  CHECK_THROWS_AS((void)store.remove_sync_highlight(id, 3, "h-1"), NotFound);
}

TEST_CASE("event log") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(tiny_doc()).id;
  CHECK(store.append_events(id, {ev(1, "play"), ev(2, "pause")}) == 2);
  CHECK(store.append_events(id, {ev(3, "scroll")}) == 1);
  const auto events = store.read_events(id);
  REQUIRE(events.size() == 3);
  CHECK(events[2].kind == "scroll");
  CHECK(store.get(id).revision == 1);
  CHECK_THROWS_AS((void)store.append_events(id, {ev(5, "a"), ev(4, "b")}), Invalid);
  CHECK(store.read_events(id).size() == 3);
  CHECK_THROWS_AS((void)store.append_events("nope", {ev(1, "a")}), NotFound);
  const auto other = store.create(tiny_doc()).id;
  CHECK(store.read_events(other).empty());
}

TEST_CASE("an interrupted write leaves the previous revision") {
  TempDir dir;
  Store store(dir.path());
  const auto id = store.create(tiny_doc()).id;
  for (auto stage : {WriteStage::temp_written, WriteStage::before_rename}) {
    store.set_write_hook([stage](WriteStage s) {
      if (s == stage) throw std::runtime_error("power cut");
    });
    CHECK_THROWS_WITH((void)store.set_link(id, 1, {"s1", {"p1", "p2"}}), "power cut");
    store.set_write_hook({});
    const auto now = store.get(id);
    CHECK(now.revision == 1);
    CHECK(now.doc == tiny_doc());
  }
  CHECK(store.set_link(id, 1, {"s1", {"p1", "p2"}}).revision == 2);
  Store reopened(dir.path());
  CHECK(reopened.get(id).revision == 2);
}
