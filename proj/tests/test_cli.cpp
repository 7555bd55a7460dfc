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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "papeo/experiments.hpp"
#include "papeo/json_io.hpp"
#include "synthetic.hpp"
#include "test_server.hpp"

using namespace papeo;
using papeo::testing::TempDir;
using papeo::testing::fixture;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run papeo_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Ingests the three-page fixture and segments it at sentence ends.
std::string segmented_doc(const TempDir& dir) {
  const auto raw = (dir.path() / "raw.json").string();
  const auto seg = (dir.path() / "seg.json").string();
  REQUIRE(papeo_cli({"ingest", "--layout", fixture("three_page/layout.json").string(),
                     "--transcript", fixture("three_page/talk.vtt").string(), "--video-uri",
                     "media/talk.mp4", "-o", raw})
              .code == cli::kOk);
  REQUIRE(papeo_cli({"segment", raw, "-o", seg}).code == cli::kOk);
  return seg;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(papeo_cli({}).code == cli::kUsage);
  CHECK(papeo_cli({"frobnicate"}).code == cli::kUsage);
  CHECK(papeo_cli({"link"}).code == cli::kUsage);
  CHECK(papeo_cli({"link", "x.json", "--p-forward", "1.5"}).code == cli::kUsage);
  CHECK(papeo_cli({"link", "x.json", "--transition", "sideways"}).code == cli::kUsage);
  const auto help = papeo_cli({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("grid-search") != std::string::npos);
}

TEST_CASE("data errors") {
  TempDir dir;
  CHECK(papeo_cli({"export", (dir.path() / "missing.json").string()}).code == cli::kDataError);
  std::ofstream(dir.path() / "bad.json") << "{";
  const auto r = papeo_cli({"stats", (dir.path() / "bad.json").string()});
  CHECK(r.code == cli::kDataError);
  CHECK(r.err.find("papeo:") == 0);
  CHECK(papeo_cli({"export"}).code == cli::kDataError);
  CHECK(papeo_cli({"segment", fixture("three_page/talk.vtt").string(), "--method", "hsv"}).code ==
        cli::kDataError);
}

TEST_CASE("invalid documents report their violations") {
  TempDir dir;
  auto doc = testing::tiny_doc();
  auto bytes = parse_json(serialize(doc));
  bytes["links"][0]["passage_ids"] = {"ghost"};
  std::ofstream(dir.path() / "doc.json") << bytes.dump();
  const auto r = papeo_cli({"export", (dir.path() / "doc.json").string()});
  CHECK(r.code == cli::kDataError);
  CHECK(r.err.find("dangling-reference") != std::string::npos);
}

TEST_CASE("ingest, segment, link, export") {
  TempDir dir;
  const auto raw = (dir.path() / "raw.json").string();
  auto r = papeo_cli({"--json", "ingest", "--layout", fixture("three_page/layout.json").string(),
                      "--transcript", fixture("three_page/talk.vtt").string(), "-o", raw});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["passages"] == 15);
  CHECK(r.json()["lines"] == 13);
  CHECK(r.json()["duration_ms"] == 70000);

  r = papeo_cli({"--json", "segment", raw});
  REQUIRE(r.code == cli::kOk);
  const auto boundaries = r.json()["boundaries_ms"];
  CHECK(boundaries.front() == 4200);
  CHECK(boundaries[1] == 14000);
  CHECK(r.json()["segments"].size() == boundaries.size() + 1);

  const auto seg = segmented_doc(dir);
  const auto linked = (dir.path() / "linked.json").string();
  r = papeo_cli({"--json", "link", seg, "-o", linked});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["embedder"] == "builtin");
  CHECK(r.json()["transition"] == "per-direction");
  CHECK(r.json()["segments"][0]["suggestions"].size() == 5);
  const auto doc = deserialize(testing::read_text(linked));
  CHECK(doc.links.size() == doc.segments.size());

  r = papeo_cli({"export", linked});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out == serialize(doc));

  r = papeo_cli({"--json", "stats", linked});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["num_links"] == doc.links.size());
}

TEST_CASE("json output is deterministic") {
  TempDir dir;
  const auto seg = segmented_doc(dir);
  const auto a = papeo_cli({"--json", "link", seg});
  const auto b = papeo_cli({"--json", "link", seg});
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == b.out);
}

TEST_CASE("link options") {
  TempDir dir;
  const auto seg = segmented_doc(dir);
  auto r = papeo_cli({"--json", "--top-k", "3", "link", seg});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["top_k"] == 3);
  const auto top3 = r.json();
  for (const auto& s : top3["segments"]) CHECK(s["suggestions"].size() == 3);

  r = papeo_cli({"--json", "link", seg, "--transition", "uniform", "--p-forward", "0.7"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["transition"] == "uniform");
  CHECK(r.json()["p_forward"] == 0.7);
}

TEST_CASE("config file and environment") {
  TempDir dir;
  const auto seg = segmented_doc(dir);
  const auto cfg = dir.path() / "papeo.cfg";
  std::ofstream(cfg) << "top-k = 2\np-forward = 0.75\n";

  auto r = papeo_cli({"--json", "--config", cfg.string(), "link", seg});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["top_k"] == 2);
  CHECK(r.json()["p_forward"] == 0.75);

  r = papeo_cli({"--json", "--config", cfg.string(), "--top-k", "4", "link", seg});
  CHECK(r.json()["top_k"] == 4);

  ::setenv("PAPEO_CONFIG", cfg.string().c_str(), 1);
  r = papeo_cli({"--json", "link", seg});
  ::unsetenv("PAPEO_CONFIG");
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["top_k"] == 2);
}

TEST_CASE("unreachable embedding service") {
  TempDir dir;
  const auto seg = segmented_doc(dir);
  const std::vector<std::string> base{"--json", "--embedder", "http", "--embed-endpoint",
                                      "http://127.0.0.1:1/embed", "--embed-timeout-ms", "500"};
  auto args = base;
  args.insert(args.end(), {"--no-fallback", "link", seg});
  const auto failed = papeo_cli(args);
  CHECK(failed.code == cli::kProviderError);
  CHECK(failed.err.find("embedding provider error") != std::string::npos);

  args = base;
  args.insert(args.end(), {"link", seg});
  const auto degraded = papeo_cli(args);
  REQUIRE(degraded.code == cli::kOk);
  CHECK(degraded.json()["degraded"] == true);
}

TEST_CASE("evaluate matches the library") {
  TempDir dir;
  std::vector<experiments::EvalPair> pairs;
  for (std::uint64_t s = 0; s < 3; ++s) pairs.push_back(testing::synthetic_slide_pair(s));
  const auto manifest = testing::write_dataset(dir.path() / "data", pairs);
  const auto r = papeo_cli({"--json", "--beta", "3", "evaluate", "--dataset", manifest.string(),
                            "--method", "punctuation,hsv"});
  REQUIRE(r.code == cli::kOk);
  const auto reports = r.json()["reports"];
  REQUIRE(reports.size() == 2);

  const auto loaded = experiments::load_dataset(manifest);
  const std::vector<std::size_t> all{0, 1, 2};
  evaluation::EvalConfig cfg;
  cfg.betas = {3.0};
  segmentation::SegmenterConfig seg;
  CHECK(reports[0] == experiments::to_json(experiments::evaluate_segmentation(
                          loaded, all, segmentation::Method::punctuation, seg, cfg)));
  seg.threshold = 30;
  CHECK(reports[1] == experiments::to_json(experiments::evaluate_segmentation(
                          loaded, all, segmentation::Method::hsv, seg, cfg)));
  CHECK(reports[1]["macro"].contains("f3"));
  CHECK_FALSE(reports[1]["macro"].contains("f1"));

  const auto table = papeo_cli({"evaluate", "--dataset", manifest.string()});
  REQUIRE(table.code == cli::kOk);
  CHECK(table.out.find("template") != std::string::npos);
}

TEST_CASE("linking evaluation and grid search") {
  TempDir dir;
  std::vector<experiments::EvalPair> pairs;
  for (std::uint64_t s = 0; s < 4; ++s) pairs.push_back(testing::synthetic_linking_pair(90 + s));
  const auto manifest = testing::write_dataset(dir.path() / "data", pairs).string();
  auto r = papeo_cli({"--json", "evaluate", "--task", "linking", "--dataset", manifest});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["reports"].size() == 5);
  CHECK(r.json()["reports"][4]["method"] == "viterbi");

  r = papeo_cli({"--json", "--jobs", "2", "grid-search", "--task", "linking", "--dataset",
                 manifest, "--p-forward-grid", "0.5,0.9"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.json()["cv"]["folds"].size() == 4);
  CHECK(papeo_cli({"evaluate", "--task", "topics", "--dataset", manifest}).code ==
        cli::kDataError);
}

TEST_CASE("segmentation grid search recovers the planted threshold") {
  TempDir dir;
  testing::SlideVideoOptions opts;
  opts.noise = true;
  std::vector<experiments::EvalPair> pairs;
  for (std::uint64_t s = 0; s < 8; ++s) pairs.push_back(testing::synthetic_slide_pair(40 + s, opts));
  const auto manifest = testing::write_dataset(dir.path() / "data", pairs).string();
  const auto r = papeo_cli({"--json", "--seed", "3", "--jobs", "3", "grid-search", "--dataset",
                            manifest, "--thresholds", "20,30,40,50", "--min-segments", "0"});
  REQUIRE(r.code == cli::kOk);
  const auto j = r.json();
  CHECK(j["method"] == "hsv");
  REQUIRE(j["cv"]["folds"].size() == 4);
  for (const auto& f : j["cv"]["folds"]) CHECK(f["best"]["threshold"] == 40.0);
}
