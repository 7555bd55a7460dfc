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

#include <algorithm>

#include "papeo/model.hpp"
#include "synthetic.hpp"

using namespace papeo;
using papeo::testing::tiny_doc;

namespace {

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.rule == rule; });
}

}  // namespace

TEST_CASE("tiny doc is valid") { CHECK(validate(tiny_doc()).empty()); }

TEST_CASE("seconds conversion rounds to the nearest millisecond") {
  CHECK(from_seconds(1.2345) == Millis{1235});
  CHECK(from_seconds(-0.0004) == Millis{0});
  CHECK(to_seconds(Millis{2500}) == doctest::Approx(2.5));
}

TEST_CASE("passage kinds round-trip through strings") {
  for (auto k : {PassageKind::paragraph, PassageKind::figure, PassageKind::table,
                 PassageKind::caption, PassageKind::heading}) {
    CHECK(passage_kind_from_string(to_string(k)) == k);
  }
  CHECK_FALSE(passage_kind_from_string("equation").has_value());
}

TEST_CASE("paper rules") {
  auto doc = tiny_doc();
  SUBCASE("duplicate passage id") {
    doc.paper.passages[2].id = "p1";
    CHECK(has_rule(validate(doc), "passage-id-unique"));
  }
  SUBCASE("empty paragraph") {
    doc.paper.passages[1].text = "   ";
    CHECK(has_rule(validate(doc), "paragraph-text"));
  }
  SUBCASE("empty figure is fine") {
    doc.paper.passages.push_back({"f1", PassageKind::figure, {}, 2, {0, 0, 10, 10}, ""});
    CHECK(validate(doc).empty());
  }
  SUBCASE("pages go backwards") {
    doc.paper.passages[2].page = 1;
    doc.paper.passages[1].page = 2;
    CHECK(has_rule(validate(doc), "passage-order"));
  }
  SUBCASE("negative bbox") {
    doc.paper.passages[0].bbox.w = -1;
    CHECK(has_rule(validate(doc), "passage-bbox"));
  }
  SUBCASE("no passages") {
    doc = PapeoDoc{};
    CHECK(has_rule(validate(doc), "paper-empty"));
  }
}

TEST_CASE("transcript rules") {
  auto doc = tiny_doc();
  SUBCASE("index gap") {
    doc.transcript[2].index = 5;
    CHECK(has_rule(validate(doc), "line-index"));
  }
  SUBCASE("zero-length line") {
    doc.transcript[1].end = doc.transcript[1].start;
    CHECK(has_rule(validate(doc), "line-time"));
  }
  SUBCASE("line past the video") {
    doc.video.duration = Millis{15000};
    const auto v = validate(doc);
    CHECK(has_rule(v, "line-duration"));
    CHECK(has_rule(v, "segment-duration"));
  }
}

TEST_CASE("segment rules") {
  auto doc = tiny_doc();
  SUBCASE("overlap") {
    doc.segments[1].start = Millis{8000};
    CHECK(has_rule(validate(doc), "segment-overlap"));
  }
  SUBCASE("touching segments do not overlap") {
    CHECK(doc.segments[0].end == doc.segments[1].start);
    CHECK_FALSE(has_rule(validate(doc), "segment-overlap"));
  }
  SUBCASE("out of order") {
    std::swap(doc.segments[0], doc.segments[1]);
    CHECK(has_rule(validate(doc), "segment-order"));
  }
  SUBCASE("non-contiguous lines") {
    doc.segments[1].line_indices = {1, 3};
    CHECK(has_rule(validate(doc), "segment-lines"));
  }
  SUBCASE("duplicate id") {
    doc.segments[1].id = "s1";
    CHECK(has_rule(validate(doc), "segment-id-unique"));
  }
}

TEST_CASE("link rules") {
  auto doc = tiny_doc();
  SUBCASE("unknown segment") {
    doc.links.push_back({"s9", {"p1"}});
    CHECK(has_rule(validate(doc), "dangling-reference"));
  }
  SUBCASE("unknown passage") {
    doc.links[1].passage_ids.push_back("p7");
    CHECK(has_rule(validate(doc), "dangling-reference"));
  }
  SUBCASE("empty link") {
    doc.links[1].passage_ids.clear();
    CHECK(has_rule(validate(doc), "link-empty"));
  }
  SUBCASE("second link for one segment") {
    doc.links.push_back({"s1", {"p2"}});
    CHECK(has_rule(validate(doc), "link-duplicate"));
  }
  SUBCASE("repeated passage") {
    doc.links[0].passage_ids.push_back("p1");
    CHECK(has_rule(validate(doc), "link-passage-duplicate"));
  }
}

TEST_CASE("highlight rules") {
  auto doc = tiny_doc();
  SUBCASE("needs the link") {
    doc.sync_highlights[0].passage_id = "p2";
    CHECK(has_rule(validate(doc), "highlight-requires-link"));
  }
  SUBCASE("line outside the segment") {
    doc.sync_highlights[0].transcript_span.line_index = 2;
    CHECK(has_rule(validate(doc), "highlight-span"));
  }
  SUBCASE("token span past the end") {
    doc.sync_highlights[0].passage_span = {2, 9};
    CHECK(has_rule(validate(doc), "highlight-span"));
  }
  SUBCASE("empty span") {
    doc.sync_highlights[0].transcript_span.token_end = 0;
    CHECK(has_rule(validate(doc), "highlight-span"));
  }
  SUBCASE("missing segment") {
    doc.sync_highlights[0].segment_id = "nope";
    CHECK(has_rule(validate(doc), "dangling-reference"));
  }
}

TEST_CASE("validate reports every violation, not just the first") {
  auto doc = tiny_doc();
  doc.schema_version = "papeo/0";
  doc.segments[1].start = Millis{8000};
  doc.links[0].passage_ids = {"zz"};
  const auto v = validate(doc);
  CHECK(has_rule(v, "schema-version"));
  CHECK(has_rule(v, "segment-overlap"));
  CHECK(has_rule(v, "dangling-reference"));
}

TEST_CASE("stats") {
  const auto s = papeo_stats(tiny_doc());
  CHECK(s.num_links == 2);
  CHECK(s.avg_passages_per_link == doctest::Approx(1.5));
  CHECK(s.avg_segment_len_s == doctest::Approx(10.0));
  CHECK(s.num_sync_highlights == 1);

  PapeoDoc empty = tiny_doc();
  empty.links.clear();
  const auto e = papeo_stats(empty);
  CHECK(e.num_links == 0);
  CHECK_FALSE(e.avg_passages_per_link.has_value());
  CHECK_FALSE(e.avg_segment_len_s.has_value());
}

TEST_CASE("segment text joins its lines") {
  const auto doc = tiny_doc();
  CHECK(segment_text(doc, doc.segments[1]) == "We count floes. In satellite images.");
  CHECK(span_tokens("  two\twords ") == std::vector<std::string>{"two", "words"});
}
