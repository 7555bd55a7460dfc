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

#include "cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "papeo/errors.hpp"
#include "papeo/experiments.hpp"
#include "papeo/image.hpp"
#include "papeo/ingest.hpp"
#include "papeo/interactions.hpp"
#include "papeo/json_io.hpp"
#include "papeo/linking.hpp"
#include "papeo/segmentation.hpp"
#include "papeo/service.hpp"
#include "papeo/store.hpp"

namespace papeo::cli {
namespace {

namespace fs = std::filesystem;

// Tuning knobs shared by every subcommand. They live on the root command so a
// flat `key = value` config file can set them; subcommands fall through.
struct Tuning {
  bool json = false;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;

  std::optional<double> threshold;
  double min_segment_s = 0.0;
  std::string punctuation{ingest::kDefaultTerminalPunctuation};

  double p_forward = 0.6;
  std::string transition = "per-direction";
  std::size_t top_k = 5;
  std::string embedder = "builtin";
  std::string embed_endpoint;
  std::string embed_model;
  long long embed_timeout_ms = 10000;
  std::size_t embed_batch = 32;
  bool no_fallback = false;

  double tolerance_s = 3.0;
  std::vector<double> betas{1.0, 2.0, 3.0};
  std::vector<std::size_t> k_values{1, 5};
  std::size_t folds = 4;
  double train_fraction = 0.25;
  std::string counting = "any";
};

constexpr double kDefaultHsvThreshold = 30.0;
constexpr double kDefaultTemplateThreshold = 0.9;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << bytes;
  if (!out) throw InputError("write failed for " + path.string());
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string seconds(Millis t) { return fmt("%.3f", to_seconds(t)); }

segmentation::SegmenterConfig segmenter_config(const Tuning& t, segmentation::Method method) {
  segmentation::SegmenterConfig cfg;
  cfg.min_segment = from_seconds(t.min_segment_s);
  cfg.punctuation_set = t.punctuation;
  if (t.threshold) {
    cfg.threshold = *t.threshold;
  } else if (method == segmentation::Method::hsv) {
    cfg.threshold = kDefaultHsvThreshold;
  } else if (method == segmentation::Method::template_match) {
    cfg.threshold = kDefaultTemplateThreshold;
  }
  if (cfg.min_segment.count() < 0) throw InputError("min-segment must be >= 0");
  return cfg;
}

linking::LinkerConfig linker_config(const Tuning& t) {
  linking::LinkerConfig cfg;
  cfg.p_forward = t.p_forward;
  cfg.transition = linking::transition_model_from_string(t.transition);
  cfg.top_k = t.top_k;
  cfg.embedder = t.embedder;
  cfg.rouge_only_fallback = !t.no_fallback;
  linking::check(cfg);
  return cfg;
}

std::unique_ptr<linking::EmbeddingProvider> provider(const Tuning& t) {
  linking::HttpProviderOptions opts;
  opts.endpoint = t.embed_endpoint;
  opts.model = t.embed_model;
  opts.batch_size = t.embed_batch;
  opts.timeout = Millis{t.embed_timeout_ms};
  return linking::make_provider(t.embedder, opts);
}

evaluation::EvalConfig eval_config(const Tuning& t) {
  evaluation::EvalConfig cfg;
  cfg.tolerance = from_seconds(t.tolerance_s);
  cfg.betas = t.betas;
  cfg.k_values = t.k_values;
  cfg.folds = t.folds;
  cfg.train_fraction = t.train_fraction;
  cfg.seed = t.seed;
  if (t.counting == "any") {
    cfg.counting = evaluation::TopKCounting::per_segment_any;
  } else if (t.counting == "per-passage") {
    cfg.counting = evaluation::TopKCounting::per_link_passage;
  } else {
    throw InputError("counting must be 'any' or 'per-passage'");
  }
  evaluation::check(cfg);
  return cfg;
}

PapeoDoc load_doc(const fs::path& path) { return deserialize(read_file(path)); }

class Output {
 public:
  Output(std::ostream& out, bool json) : out_(out), json_(json) {}
  bool json() const { return json_; }
  void emit(const Json& j, const std::string& human) {
    if (json_) {
      out_ << j.dump(2) << "\n";
    } else {
      out_ << human;
    }
  }
  std::ostream& stream() { return out_; }

 private:
  std::ostream& out_;
  bool json_;
};

// --- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string layout;
  std::string transcript;
  std::string video_uri;
  std::optional<long long> duration_ms;
  std::optional<double> frame_rate;
  std::string output;
};

void cmd_ingest(const IngestArgs& a, Output& out) {
  PapeoDoc doc;
  doc.paper = ingest::parse_layout(read_file(a.layout));
  auto parsed = ingest::parse_transcript(read_file(a.transcript),
                                         ingest::format_from_path(a.transcript));
  doc.transcript = std::move(parsed.lines);
  doc.video.uri = a.video_uri;
  doc.video.frame_rate = a.frame_rate;
  if (a.duration_ms) {
    doc.video.duration = Millis{*a.duration_ms};
  } else {
    for (const auto& l : doc.transcript) doc.video.duration = std::max(doc.video.duration, l.end);
  }
  const std::string bytes = serialize(doc);
  if (a.output.empty()) {
    out.stream() << bytes;
    return;
  }
  write_file(a.output, bytes);
  Json j = {{"output", a.output},
            {"passages", doc.paper.passages.size()},
            {"lines", doc.transcript.size()},
            {"duration_ms", doc.video.duration.count()},
            {"warnings", parsed.warnings}};
  std::string human = "wrote " + a.output + ": " + std::to_string(doc.paper.passages.size()) +
                      " passages, " + std::to_string(doc.transcript.size()) + " lines\n";
  for (const auto& w : parsed.warnings) human += "warning: " + w + "\n";
  out.emit(j, human);
}

// --- segment --------------------------------------------------------------

struct SegmentArgs {
  std::string input;
  std::string method = "punctuation";
  std::string frames;
  std::optional<long long> duration_ms;
  std::string output;
};

void cmd_segment(const SegmentArgs& a, const Tuning& t, Output& out) {
  const auto method = segmentation::method_from_string(a.method);
  const auto cfg = segmenter_config(t, method);
  const bool is_doc = fs::path(a.input).extension() == ".json";
  PapeoDoc doc;
  if (is_doc) {
    doc = load_doc(a.input);
  } else {
    doc.transcript = ingest::parse_transcript(read_file(a.input),
                                              ingest::format_from_path(a.input))
                         .lines;
    for (const auto& l : doc.transcript) doc.video.duration = std::max(doc.video.duration, l.end);
  }
  if (!a.output.empty() && !is_doc) throw InputError("--output needs a papeo.json input");

  std::vector<Millis> raw;
  if (method == segmentation::Method::punctuation) {
    raw = segmentation::segment_by_punctuation(doc.transcript, cfg.punctuation_set);
  } else {
    if (a.frames.empty()) throw InputError("--frames is required for method " + a.method);
    const auto frames = load_frames_manifest(a.frames);
    if (!is_doc && !frames.empty()) {
      doc.video.duration = std::max(doc.video.duration, frames.back().timestamp);
    }
    raw = method == segmentation::Method::hsv ? segmentation::segment_by_hsv(frames, cfg)
                                              : segmentation::segment_by_template(frames, cfg);
  }
  if (a.duration_ms) doc.video.duration = Millis{*a.duration_ms};
  const auto boundaries = experiments::interior(raw, doc.video.duration);
  auto segments = boundaries.empty() && doc.video.duration.count() <= 0
                      ? std::vector<VideoSegment>{}
                      : segmentation::boundaries_to_segments(boundaries, doc.video.duration,
                                                             doc.transcript);

  Json j;
  j["method"] = std::string(segmentation::to_string(method));
  j["boundaries_ms"] = Json::array();
  for (auto b : boundaries) j["boundaries_ms"].push_back(b.count());
  j["segments"] = Json::array();
  for (const auto& s : segments) j["segments"].push_back(to_json(s));

  std::string human = "method " + std::string(segmentation::to_string(method)) + ", " +
                      std::to_string(boundaries.size()) + " boundaries\n";
  for (const auto& s : segments) {
    human += s.id + "\t" + seconds(s.start) + "\t" + seconds(s.end) + "\t" +
             std::to_string(s.line_indices.size()) + " lines\n";
  }

  if (!a.output.empty()) {
    doc.segments = std::move(segments);
    doc.links.clear();
    doc.sync_highlights.clear();
    write_file(a.output, serialize(doc));
    j["output"] = a.output;
    human += "wrote " + a.output + "\n";
  }
  out.emit(j, human);
}

// --- link -----------------------------------------------------------------

struct LinkArgs {
  std::string input;
  std::string output;
};

void cmd_link(const LinkArgs& a, const Tuning& t, Output& out) {
  PapeoDoc doc = load_doc(a.input);
  const auto cfg = linker_config(t);
  const auto prov = provider(t);
  const auto results = linking::suggest_all(doc, cfg, prov.get());

  Json j;
  j["p_forward"] = cfg.p_forward;
  j["transition"] = linking::to_string(cfg.transition);
  j["top_k"] = cfg.top_k;
  j["embedder"] = prov->name();
  bool degraded = false;
  for (const auto& r : results) degraded = degraded || r.degraded;
  j["degraded"] = degraded;
  j["segments"] = Json::array();
  std::string human;
  if (degraded) human += "embedding provider failed; ROUGE-L only\n";
  for (std::size_t s = 0; s < doc.segments.size(); ++s) {
    Json sug = Json::array();
    human += doc.segments[s].id;
    for (const auto& x : results[s].suggestions) {
      sug.push_back({{"passage_id", x.passage_id}, {"score", x.score}});
      human += "\t" + x.passage_id + " (" + fmt("%.3f", x.score) + ")";
    }
    human += "\n";
    j["segments"].push_back({{"segment_id", doc.segments[s].id}, {"suggestions", sug}});
  }

  if (!a.output.empty()) {
    doc.links.clear();
    for (std::size_t s = 0; s < doc.segments.size(); ++s) {
      if (results[s].suggestions.empty()) continue;
      doc.links.push_back({doc.segments[s].id, {results[s].suggestions.front().passage_id}});
    }
    std::erase_if(doc.sync_highlights, [&](const SyncHighlight& h) {
      const auto* link = doc.find_link(h.segment_id);
      return !link || std::find(link->passage_ids.begin(), link->passage_ids.end(),
                                h.passage_id) == link->passage_ids.end();
    });
    write_file(a.output, serialize(doc));
    j["output"] = a.output;
    human += "wrote " + a.output + "\n";
  }
  out.emit(j, human);
}

// --- evaluate / grid-search -----------------------------------------------

struct EvalArgs {
  std::string dataset;
  std::string task = "segmentation";
  std::vector<std::string> methods;
  std::vector<double> thresholds;
  std::vector<double> min_segments;
  std::vector<double> p_forward_grid;
};

bool all_have_frames(const std::vector<experiments::EvalPair>& pairs) {
  return std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return !p.frames.empty(); });
}

std::vector<std::size_t> all_pairs(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::vector<experiments::LinkingCase> linking_cases(
    const std::vector<experiments::EvalPair>& pairs, const linking::LinkerConfig& cfg,
    const linking::EmbeddingProvider* prov, std::size_t jobs) {
  std::vector<experiments::LinkingCase> cases(pairs.size());
  evaluation::parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    cases[i] = experiments::prepare_linking_case(pairs[i], cfg, prov);
  });
  return cases;
}

void cmd_evaluate(const EvalArgs& a, const Tuning& t, Output& out) {
  const auto pairs = experiments::load_dataset(a.dataset);
  const auto cfg = eval_config(t);
  const auto subset = all_pairs(pairs.size());
  Json j;
  j["task"] = a.task;
  j["dataset"] = a.dataset;
  j["reports"] = Json::array();
  if (a.task == "segmentation") {
    std::vector<std::string> methods = a.methods;
    if (methods.empty()) {
      methods = {"punctuation"};
      if (all_have_frames(pairs)) {
        methods.push_back("hsv");
        methods.push_back("template");
      }
    }
    std::vector<experiments::SegmentationReport> reports(methods.size());
    evaluation::parallel_for(methods.size(), t.jobs, [&](std::size_t m) {
      const auto method = segmentation::method_from_string(methods[m]);
      reports[m] = experiments::evaluate_segmentation(pairs, subset, method,
                                                      segmenter_config(t, method), cfg);
    });
    for (const auto& r : reports) j["reports"].push_back(experiments::to_json(r));
    out.emit(j, experiments::format_segmentation_table(reports, cfg.betas));
  } else if (a.task == "linking") {
    const auto link_cfg = linker_config(t);
    const auto prov = provider(t);
    const auto cases = linking_cases(pairs, link_cfg, prov.get(), t.jobs);
    std::vector<std::string> methods = a.methods;
    if (methods.empty()) methods = {"random", "embed", "rouge", "combined", "viterbi"};
    std::vector<experiments::LinkingReport> reports;
    for (const auto& m : methods) {
      reports.push_back(experiments::evaluate_linking(
          pairs, cases, subset, experiments::link_method_from_string(m), link_cfg, cfg));
    }
    for (const auto& r : reports) j["reports"].push_back(experiments::to_json(r));
    out.emit(j, experiments::format_linking_table(reports, cfg.k_values));
  } else {
    throw InputError("task must be 'segmentation' or 'linking'");
  }
}

std::vector<double> range(double from, double to, double step) {
  std::vector<double> v;
  for (int i = 0; from + i * step <= to + 1e-9; ++i) v.push_back(from + i * step);
  return v;
}

void cmd_grid_search(const EvalArgs& a, const Tuning& t, Output& out) {
  const auto pairs = experiments::load_dataset(a.dataset);
  const auto cfg = eval_config(t);
  evaluation::CvResult result;
  Json j;
  j["task"] = a.task;
  if (a.task == "segmentation") {
    const std::string name = a.methods.empty() ? "hsv" : a.methods.front();
    const auto method = segmentation::method_from_string(name);
    auto thresholds = a.thresholds;
    if (thresholds.empty()) {
      thresholds = method == segmentation::Method::template_match ? range(0.5, 0.95, 0.05)
                                                                  : range(10.0, 80.0, 10.0);
    }
    auto mins = a.min_segments.empty() ? std::vector<double>{0.0, 2.0, 5.0, 10.0}
                                       : a.min_segments;
    result = experiments::grid_search_segmentation(pairs, method, thresholds, mins,
                                                   segmenter_config(t, method), cfg, t.jobs);
    j["method"] = std::string(segmentation::to_string(method));
  } else if (a.task == "linking") {
    const auto link_cfg = linker_config(t);
    const auto prov = provider(t);
    const auto cases = linking_cases(pairs, link_cfg, prov.get(), t.jobs);
    auto grid = a.p_forward_grid.empty() ? range(0.1, 0.9, 0.1) : a.p_forward_grid;
    result = experiments::grid_search_linking(pairs, cases, grid, link_cfg, cfg, t.jobs);
    j["method"] = "viterbi";
  } else {
    throw InputError("task must be 'segmentation' or 'linking'");
  }
  j["cv"] = experiments::to_json(result);
  out.emit(j, experiments::format_cv_table(result));
}

// --- stats ----------------------------------------------------------------

struct StatsArgs {
  std::string input;
  std::string events;
};

void cmd_stats(const StatsArgs& a, Output& out) {
  const PapeoDoc doc = load_doc(a.input);
  const auto stats = papeo_stats(doc);
  Json j = to_json(stats);
  auto opt = [](const std::optional<double>& v) { return v ? fmt("%.3f", *v) : "-"; };
  std::string human = "links\t" + std::to_string(stats.num_links) + "\n" +
                      "avg passages per link\t" + opt(stats.avg_passages_per_link) + "\n" +
                      "avg segment length (s)\t" + opt(stats.avg_segment_len_s) + "\n" +
                      "sync highlights\t" + std::to_string(stats.num_sync_highlights) + "\n";
  if (!a.events.empty()) {
    const auto events = evaluation::parse_events(read_file(a.events));
    const auto counts = evaluation::count_interactions(events);
    const auto sessions = evaluation::session_stats(events);
    j["interactions"] = {{"switches", counts.switches},
                         {"scrolls", counts.scrolls},
                         {"scrubs", counts.scrubs}};
    j["sessions"] = {{"count", sessions.sessions.size()},
                     {"dropped", sessions.dropped},
                     {"actions_per_session", sessions.actions_per_session},
                     {"session_minutes", sessions.session_minutes}};
    human += "switches\t" + std::to_string(counts.switches) + "\n" + "scrolls\t" +
             std::to_string(counts.scrolls) + "\n" + "scrubs\t" + std::to_string(counts.scrubs) +
             "\n" + "sessions\t" + std::to_string(sessions.sessions.size()) + " (" +
             std::to_string(sessions.dropped) + " dropped)\n" + "actions per session\t" +
             fmt("%.2f", sessions.actions_per_session) + "\n" + "session minutes\t" +
             fmt("%.2f", sessions.session_minutes) + "\n";
  }
  out.emit(j, human);
}

// --- serve ----------------------------------------------------------------

struct ServeArgs {
  std::string root = "papeo-store";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::string media_dir;
};

void cmd_serve(const ServeArgs& a, const Tuning& t, Output& out) {
  store::Store store(a.root);
  service::ServiceConfig cfg;
  cfg.linker = linker_config(t);
  cfg.punctuation_set = t.punctuation;
  if (!a.static_dir.empty()) cfg.static_dir = a.static_dir;
  if (!a.media_dir.empty()) cfg.media_dir = a.media_dir;
  std::shared_ptr<const linking::EmbeddingProvider> prov = provider(t);
  service::Service svc(store, cfg, prov);
  httplib::Server server;
  svc.register_routes(server);
  if (!server.bind_to_port(a.host, a.port)) {
    throw InputError("cannot bind " + a.host + ":" + std::to_string(a.port));
  }
  out.emit({{"listening", "http://" + a.host + ":" + std::to_string(a.port)}},
           "listening on http://" + a.host + ":" + std::to_string(a.port) + "\n");
  out.stream().flush();
  server.listen_after_bind();
}

// --- export ---------------------------------------------------------------

struct ExportArgs {
  std::string input;
  std::string store_root;
  std::string id;
  std::string output;
};

void cmd_export(const ExportArgs& a, Output& out) {
  PapeoDoc doc;
  if (!a.input.empty()) {
    doc = load_doc(a.input);
  } else if (!a.store_root.empty() && !a.id.empty()) {
    doc = store::Store(a.store_root).get(a.id).doc;
  } else {
    throw InputError("export needs an input file or --store with --id");
  }
  const std::string bytes = serialize(doc);
  if (a.output.empty()) {
    out.stream() << bytes;
    return;
  }
  write_file(a.output, bytes);
  out.emit({{"output", a.output}, {"bytes", bytes.size()}},
           "wrote " + a.output + " (" + std::to_string(bytes.size()) + " bytes)\n");
}

void add_list_option(CLI::App* app, const std::string& name, auto& target,
                     const std::string& help) {
  app->add_option(name, target, help)->delimiter(',')->allow_extra_args(false);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Papeo: link talk-video segments to paper passages"};
  app.name("papeo");
  app.set_config("--config", "", "key = value config file; flags override it")
      ->envname("PAPEO_CONFIG");
  app.require_subcommand(1);
  app.fallthrough();

  Tuning t;
  app.add_flag("--json", t.json, "Machine-readable JSON on stdout");
  app.add_option("--jobs", t.jobs, "Worker threads for evaluation")->check(CLI::Range(1, 256));
  app.add_option("--seed", t.seed, "Seed for randomized baselines and CV splits");

  const std::string seg_group = "Segmentation";
  app.add_option("--threshold", t.threshold,
                 "Cut threshold (HSV delta in [0,255], default 30; template NCC, default 0.9)")
      ->group(seg_group);
  app.add_option("--min-segment", t.min_segment_s, "Minimum segment length in seconds")
      ->group(seg_group);
  app.add_option("--punctuation", t.punctuation, "Terminal punctuation characters")
      ->group(seg_group);

  const std::string link_group = "Linking";
  app.add_option("--p-forward", t.p_forward, "In-order transition mass")
      ->check(CLI::Range(0.0, 1.0))
      ->group(link_group);
  app.add_option("--transition", t.transition, "How p_forward spreads over passages")
      ->check(CLI::IsMember({"per-direction", "uniform"}))
      ->group(link_group);
  app.add_option("--top-k", t.top_k, "Suggestions per segment")->group(link_group);
  app.add_option("--embedder", t.embedder, "builtin or http")->group(link_group);
  app.add_option("--embed-endpoint", t.embed_endpoint, "URL of the embedding service")
      ->group(link_group);
  app.add_option("--embed-model", t.embed_model, "Model name sent to the service")
      ->group(link_group);
  app.add_option("--embed-timeout-ms", t.embed_timeout_ms)->group(link_group);
  app.add_option("--embed-batch", t.embed_batch)->group(link_group);
  app.add_flag("--no-fallback", t.no_fallback, "Fail instead of scoring ROUGE-L only")
      ->group(link_group);

  const std::string eval_group = "Evaluation";
  app.add_option("--tolerance", t.tolerance_s, "Boundary tolerance in seconds")->group(eval_group);
  add_list_option(&app, "--beta", t.betas, "F-beta values (repeat or comma list)");
  add_list_option(&app, "--k", t.k_values, "Top-k cutoffs (repeat or comma list)");
  app.get_option("--beta")->group(eval_group);
  app.get_option("--k")->group(eval_group);
  app.add_option("--folds", t.folds)->group(eval_group);
  app.add_option("--train-fraction", t.train_fraction)->group(eval_group);
  app.add_option("--counting", t.counting, "Top-k counting: any or per-passage")
      ->group(eval_group);

  IngestArgs ingest_args;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse a layout file and transcript");
  ingest_cmd->add_option("--layout", ingest_args.layout, "Layout JSON")->required();
  ingest_cmd->add_option("--transcript", ingest_args.transcript, ".srt or .vtt")->required();
  ingest_cmd->add_option("--video-uri", ingest_args.video_uri);
  ingest_cmd->add_option("--duration-ms", ingest_args.duration_ms,
                         "Video length (default: last cue end)");
  ingest_cmd->add_option("--frame-rate", ingest_args.frame_rate);
  ingest_cmd->add_option("-o,--output", ingest_args.output, "papeo.json to write");

  SegmentArgs segment_args;
  auto* segment_cmd = app.add_subcommand("segment", "Detect segment boundaries");
  segment_cmd->add_option("input", segment_args.input, "Transcript or papeo.json")->required();
  segment_cmd->add_option("--method", segment_args.method, "punctuation, hsv or template");
  segment_cmd->add_option("--frames", segment_args.frames, "Frames manifest (JSON lines)");
  segment_cmd->add_option("--duration-ms", segment_args.duration_ms);
  segment_cmd->add_option("-o,--output", segment_args.output, "Write segmented papeo.json");

  LinkArgs link_args;
  auto* link_cmd = app.add_subcommand("link", "Suggest passages for every segment");
  link_cmd->add_option("input", link_args.input, "papeo.json")->required();
  link_cmd->add_option("-o,--output", link_args.output, "Write papeo.json with top-1 links");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score methods against a dataset");
  eval_cmd->add_option("--dataset", eval_args.dataset, "Dataset manifest")->required();
  eval_cmd->add_option("--task", eval_args.task, "segmentation or linking");
  add_list_option(eval_cmd, "--method", eval_args.methods, "Methods to report");

  EvalArgs grid_args;
  auto* grid_cmd = app.add_subcommand("grid-search", "Cross-validated parameter search");
  grid_cmd->add_option("--dataset", grid_args.dataset, "Dataset manifest")->required();
  grid_cmd->add_option("--task", grid_args.task, "segmentation or linking");
  add_list_option(grid_cmd, "--method", grid_args.methods, "Segmentation method");
  add_list_option(grid_cmd, "--thresholds", grid_args.thresholds, "Threshold grid");
  add_list_option(grid_cmd, "--min-segments", grid_args.min_segments,
                  "Minimum segment length grid (s)");
  add_list_option(grid_cmd, "--p-forward-grid", grid_args.p_forward_grid, "p_forward grid");

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Summary statistics of a papeo.json");
  stats_cmd->add_option("input", stats_args.input, "papeo.json")->required();
  stats_cmd->add_option("--events", stats_args.events, "Interaction log (JSON or JSON lines)");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--root", serve_args.root, "Store directory");
  serve_cmd->add_option("--host", serve_args.host);
  serve_cmd->add_option("--port", serve_args.port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--static", serve_args.static_dir, "Webapp bundle served at /");
  serve_cmd->add_option("--media", serve_args.media_dir, "Media served at /media");

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export", "Validate and write canonical papeo.json");
  export_cmd->add_option("input", export_args.input, "papeo.json");
  export_cmd->add_option("--store", export_args.store_root, "Store directory");
  export_cmd->add_option("--id", export_args.id, "Document id in the store");
  export_cmd->add_option("-o,--output", export_args.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Output output(out, t.json);
  try {
    if (ingest_cmd->parsed()) cmd_ingest(ingest_args, output);
    if (segment_cmd->parsed()) cmd_segment(segment_args, t, output);
    if (link_cmd->parsed()) cmd_link(link_args, t, output);
    if (eval_cmd->parsed()) cmd_evaluate(eval_args, t, output);
    if (grid_cmd->parsed()) cmd_grid_search(grid_args, t, output);
    if (stats_cmd->parsed()) cmd_stats(stats_args, output);
    if (serve_cmd->parsed()) cmd_serve(serve_args, t, output);
    if (export_cmd->parsed()) cmd_export(export_args, output);
  } catch (const EmbedError& e) {
    err << "papeo: embedding provider error: " << e.what() << "\n";
    return kProviderError;
  } catch (const Invalid& e) {
    err << "papeo: " << e.what() << "\n";
    for (const auto& v : e.violations()) {
      err << "  " << v.type << " " << v.id << ": " << v.rule;
      if (!v.detail.empty()) err << " (" << v.detail << ")";
      err << "\n";
    }
    return kDataError;
  } catch (const std::exception& e) {
    err << "papeo: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}

}  // namespace papeo::cli
