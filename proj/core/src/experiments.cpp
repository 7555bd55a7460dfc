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

#include "papeo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "papeo/errors.hpp"
#include "papeo/ingest.hpp"
#include "papeo/text.hpp"

namespace papeo::experiments {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string beta_key(double beta) {
  char buf[32];
  if (beta == std::floor(beta)) {
    std::snprintf(buf, sizeof buf, "f%.0f", beta);
  } else {
    std::snprintf(buf, sizeof buf, "f%g", beta);
  }
  return buf;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const auto& cell = rows[r][c];
      if (c == 0) {
        out += cell + std::string(width[c] - cell.size(), ' ');
      } else {
        out += "  " + std::string(width[c] - cell.size(), ' ') + cell;
      }
    }
    out += "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

}  // namespace

std::vector<EvalPair> load_dataset(const std::filesystem::path& manifest) {
  const auto base = manifest.parent_path();
  Json entries = parse_json(read_file(manifest));
  if (!entries.is_array()) throw SchemaError("/", "dataset manifest must be an array");
  std::vector<EvalPair> pairs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string path = "/" + std::to_string(i);
    auto file = [&](const char* key) -> std::filesystem::path {
      if (!e.contains(key) || !e[key].is_string()) {
        throw SchemaError(path + "/" + key, "expected file path");
      }
      std::filesystem::path p = e[key].get<std::string>();
      return p.is_relative() ? base / p : p;
    };
    EvalPair pair;
    const auto layout = file("layout_file");
    const auto transcript = file("transcript_file");
    pair.name = e.contains("name") && e["name"].is_string() ? e["name"].get<std::string>()
                                                            : layout.stem().string();
    pair.paper = ingest::parse_layout(read_file(layout));
    pair.transcript =
        ingest::parse_transcript(read_file(transcript), ingest::format_from_path(transcript.string()))
            .lines;
    if (e.contains("frames_manifest") && !e["frames_manifest"].is_null()) {
      pair.frames = load_frames_manifest(file("frames_manifest"));
    }
    pair.truth = deserialize(read_file(file("ground_truth_papeo")));
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<Millis> interior(std::vector<Millis> boundaries, Millis duration) {
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());
  std::erase_if(boundaries, [&](Millis b) { return b.count() <= 0 || b >= duration; });
  return boundaries;
}

std::vector<Millis> truth_boundaries(const PapeoDoc& truth) {
  std::vector<Millis> b;
  for (const auto& s : truth.segments) {
    b.push_back(s.start);
    b.push_back(s.end);
  }
  return interior(std::move(b), truth.video.duration);
}

std::vector<Millis> predict_boundaries(const EvalPair& pair, segmentation::Method method,
                                       const segmentation::SegmenterConfig& cfg) {
  std::vector<Millis> raw;
  switch (method) {
    case segmentation::Method::punctuation:
      raw = segmentation::segment_by_punctuation(pair.transcript, cfg.punctuation_set);
      break;
    case segmentation::Method::hsv:
    case segmentation::Method::template_match:
      if (pair.frames.empty()) {
        throw InputError("pair '" + pair.name + "' has no frames for frame-based segmentation");
      }
      raw = method == segmentation::Method::hsv
                ? segmentation::segment_by_hsv(pair.frames, cfg)
                : segmentation::segment_by_template(pair.frames, cfg);
      break;
  }
  return interior(std::move(raw), pair.truth.video.duration);
}

SegmentationReport evaluate_segmentation(const std::vector<EvalPair>& pairs,
                                         std::span<const std::size_t> subset,
                                         segmentation::Method method,
                                         const segmentation::SegmenterConfig& seg_cfg,
                                         const evaluation::EvalConfig& cfg) {
  SegmentationReport report;
  report.method = std::string(segmentation::to_string(method));
  for (auto i : subset) {
    const auto& pair = pairs.at(i);
    const auto predicted = predict_boundaries(pair, method, seg_cfg);
    const auto truth = truth_boundaries(pair.truth);
    report.pair_names.push_back(pair.name);
    report.per_pair.push_back(evaluation::score_boundaries(predicted, truth, cfg));
  }
  report.macro = evaluation::macro_average(report.per_pair);
  return report;
}

std::string_view to_string(LinkMethod m) {
  switch (m) {
    case LinkMethod::random_section: return "random";
    case LinkMethod::embed: return "embed";
    case LinkMethod::rouge: return "rouge";
    case LinkMethod::combined: return "combined";
    case LinkMethod::viterbi: return "viterbi";
  }
  return "viterbi";
}

LinkMethod link_method_from_string(std::string_view s) {
  if (s == "random") return LinkMethod::random_section;
  if (s == "embed") return LinkMethod::embed;
  if (s == "rouge") return LinkMethod::rouge;
  if (s == "combined") return LinkMethod::combined;
  if (s == "viterbi") return LinkMethod::viterbi;
  throw InputError("unknown linking method '" + std::string(s) + "'");
}

LinkingCase prepare_linking_case(const EvalPair& pair, const linking::LinkerConfig& cfg,
                                 const linking::EmbeddingProvider* provider) {
  LinkingCase c;
  std::vector<std::string> texts;
  for (const auto& seg : pair.truth.segments) {
    auto lines = seg.line_indices.empty()
                     ? segmentation::lines_in_range(pair.transcript, seg.start, seg.end)
                     : seg.line_indices;
    std::vector<std::string> parts;
    for (auto li : lines) {
      if (li < pair.transcript.size()) parts.push_back(pair.transcript[li].text);
    }
    texts.push_back(text::normalize_whitespace(text::join(parts)));
    c.segment_ids.push_back(seg.id);
  }
  try {
    c.matrix = linking::score_matrix(texts, pair.paper, provider, cfg);
  } catch (const EmbedError&) {
    if (!cfg.rouge_only_fallback) throw;
    c.matrix = linking::score_matrix(texts, pair.paper, nullptr, cfg);
  }
  for (const auto& link : pair.truth.links) {
    if (std::find(c.segment_ids.begin(), c.segment_ids.end(), link.segment_id) !=
        c.segment_ids.end()) {
      c.truth_links.push_back(link);
    }
  }
  return c;
}

evaluation::Rankings rank_case(const EvalPair& pair, const LinkingCase& c, LinkMethod method,
                               const linking::LinkerConfig& cfg, std::size_t depth,
                               std::uint64_t seed) {
  evaluation::Rankings out;
  const auto& m = c.matrix;
  auto emit = [&](const std::vector<std::vector<linking::RankedPassage>>& ranked) {
    for (std::size_t s = 0; s < ranked.size(); ++s) {
      auto& ids = out[c.segment_ids[s]];
      for (const auto& r : ranked[s]) ids.push_back(m.passage_ids[r.column]);
    }
  };
  switch (method) {
    case LinkMethod::random_section: {
      auto picks = linking::baseline_random_rankings(pair.paper, c.segment_ids.size(), depth, seed);
      for (std::size_t s = 0; s < picks.size(); ++s) {
        auto& ids = out[c.segment_ids[s]];
        for (auto idx : picks[s]) ids.push_back(pair.paper.passages[idx].id);
      }
      break;
    }
    case LinkMethod::embed: emit(linking::rank_by_measure(m, linking::Measure::embed, depth)); break;
    case LinkMethod::rouge: emit(linking::rank_by_measure(m, linking::Measure::rouge, depth)); break;
    case LinkMethod::combined:
      emit(linking::rank_by_measure(m, linking::Measure::combined, depth));
      break;
    case LinkMethod::viterbi:
      emit(linking::viterbi_align(m.emissions, m.rows, m.cols, cfg.p_forward, depth,
                                       cfg.transition).rankings);
      break;
  }
  return out;
}

LinkingReport evaluate_linking(const std::vector<EvalPair>& pairs,
                               const std::vector<LinkingCase>& cases,
                               std::span<const std::size_t> subset, LinkMethod method,
                               const linking::LinkerConfig& link_cfg,
                               const evaluation::EvalConfig& cfg) {
  LinkingReport report;
  report.method = std::string(to_string(method));
  std::size_t depth = 1;
  for (auto k : cfg.k_values) depth = std::max(depth, k);
  for (auto i : subset) {
    const auto rankings =
        rank_case(pairs.at(i), cases.at(i), method, link_cfg, depth, cfg.seed + i);
    std::map<std::size_t, double> acc;
    for (auto k : cfg.k_values) {
      acc[k] = evaluation::link_topk_accuracy(rankings, cases[i].truth_links, k, cfg.counting);
    }
    report.pair_names.push_back(pairs[i].name);
    report.per_pair.push_back(std::move(acc));
  }
  for (const auto& acc : report.per_pair) {
    for (const auto& [k, v] : acc) {
      report.macro[k] += v / static_cast<double>(report.per_pair.size());
    }
  }
  return report;
}

evaluation::CvResult grid_search_segmentation(const std::vector<EvalPair>& pairs,
                                              segmentation::Method method,
                                              const std::vector<double>& thresholds,
                                              const std::vector<double>& min_segment_s,
                                              const segmentation::SegmenterConfig& base,
                                              const evaluation::EvalConfig& cfg,
                                              std::size_t jobs) {
  evaluation::EvalConfig eval_cfg = cfg;
  if (std::find(eval_cfg.betas.begin(), eval_cfg.betas.end(), 3.0) == eval_cfg.betas.end()) {
    eval_cfg.betas.push_back(3.0);
  }
  const auto grid = method == segmentation::Method::punctuation
                        ? std::vector<evaluation::GridPoint>{evaluation::GridPoint{}}
                        : evaluation::cartesian_grid(
                              {{"threshold", thresholds}, {"min_segment_s", min_segment_s}});
  auto evaluate = [&](const evaluation::GridPoint& point, std::span<const std::size_t> subset) {
    segmentation::SegmenterConfig seg = base;
    if (method != segmentation::Method::punctuation) {
      seg.threshold = point.get("threshold");
      seg.min_segment = from_seconds(point.get("min_segment_s"));
    }
    const auto report = evaluate_segmentation(pairs, subset, method, seg, eval_cfg);
    evaluation::MetricMap m{{"precision", report.macro.precision},
                            {"recall", report.macro.recall}};
    for (const auto& [b, f] : report.macro.f) m[beta_key(b)] = f;
    return m;
  };
  return evaluation::grid_search_cv(pairs.size(), grid, "f3", eval_cfg, evaluate, jobs);
}

evaluation::CvResult grid_search_linking(const std::vector<EvalPair>& pairs,
                                         const std::vector<LinkingCase>& cases,
                                         const std::vector<double>& p_forward,
                                         const linking::LinkerConfig& base,
                                         const evaluation::EvalConfig& cfg, std::size_t jobs) {
  evaluation::EvalConfig eval_cfg = cfg;
  if (std::find(eval_cfg.k_values.begin(), eval_cfg.k_values.end(), 1) == eval_cfg.k_values.end()) {
    eval_cfg.k_values.push_back(1);
  }
  const auto grid = evaluation::cartesian_grid({{"p_forward", p_forward}});
  auto evaluate = [&](const evaluation::GridPoint& point, std::span<const std::size_t> subset) {
    linking::LinkerConfig link = base;
    link.p_forward = point.get("p_forward");
    const auto report =
        evaluate_linking(pairs, cases, subset, LinkMethod::viterbi, link, eval_cfg);
    evaluation::MetricMap m;
    for (const auto& [k, v] : report.macro) m["top" + std::to_string(k)] = v;
    return m;
  };
  return evaluation::grid_search_cv(pairs.size(), grid, "top1", eval_cfg, evaluate, jobs);
}

Json to_json(const SegmentationReport& r) {
  auto scores = [](const evaluation::BoundaryScores& s) {
    Json j;
    j["matches"] = s.matches;
    j["predicted"] = s.predicted;
    j["truth"] = s.truth;
    j["precision"] = s.precision;
    j["recall"] = s.recall;
    for (const auto& [b, f] : s.f) j[beta_key(b)] = f;
    return j;
  };
  Json j;
  j["method"] = r.method;
  j["per_pair"] = Json::array();
  for (std::size_t i = 0; i < r.per_pair.size(); ++i) {
    Json p = scores(r.per_pair[i]);
    p["pair"] = r.pair_names[i];
    j["per_pair"].push_back(std::move(p));
  }
  j["macro"] = scores(r.macro);
  return j;
}

Json to_json(const LinkingReport& r) {
  auto acc = [](const std::map<std::size_t, double>& m) {
    Json j;
    for (const auto& [k, v] : m) j["top" + std::to_string(k)] = v;
    return j;
  };
  Json j;
  j["method"] = r.method;
  j["per_pair"] = Json::array();
  for (std::size_t i = 0; i < r.per_pair.size(); ++i) {
    Json p = acc(r.per_pair[i]);
    p["pair"] = r.pair_names[i];
    j["per_pair"].push_back(std::move(p));
  }
  j["macro"] = acc(r.macro);
  return j;
}

Json to_json(const evaluation::CvResult& r) {
  Json j;
  j["target_metric"] = r.target_metric;
  j["folds"] = Json::array();
  for (const auto& f : r.folds) {
    Json fold;
    fold["train"] = f.split.train;
    fold["test"] = f.split.test;
    Json best = Json::object();
    for (const auto& [k, v] : f.best.values) best[k] = v;
    fold["best"] = best;
    fold["train_objective"] = f.train_objective;
    Json test = Json::object();
    for (const auto& [k, v] : f.test_metrics) test[k] = v;
    fold["test_metrics"] = test;
    j["folds"].push_back(std::move(fold));
  }
  Json mean = Json::object();
  for (const auto& [k, v] : r.mean_test_metrics) mean[k] = v;
  j["mean_test_metrics"] = mean;
  return j;
}

std::string format_segmentation_table(const std::vector<SegmentationReport>& reports,
                                      const std::vector<double>& betas) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Algorithm", "Precision", "Recall"};
  for (double b : betas) {
    auto key = beta_key(b);
    key[0] = 'F';
    header.push_back(key);
  }
  rows.push_back(header);
  for (const auto& r : reports) {
    std::vector<std::string> row{r.method, fixed3(r.macro.precision), fixed3(r.macro.recall)};
    for (double b : betas) {
      auto it = r.macro.f.find(b);
      row.push_back(it == r.macro.f.end() ? "-" : fixed3(it->second));
    }
    rows.push_back(std::move(row));
  }
  return table(rows);
}

std::string format_linking_table(const std::vector<LinkingReport>& reports,
                                 const std::vector<std::size_t>& k_values) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Algorithm"};
  for (auto k : k_values) header.push_back("Top-" + std::to_string(k));
  rows.push_back(header);
  for (const auto& r : reports) {
    std::vector<std::string> row{r.method};
    for (auto k : k_values) {
      auto it = r.macro.find(k);
      row.push_back(it == r.macro.end() ? "-" : fixed3(it->second));
    }
    rows.push_back(std::move(row));
  }
  return table(rows);
}

std::string format_cv_table(const evaluation::CvResult& r) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> metric_names;
  for (const auto& [k, v] : r.mean_test_metrics) metric_names.push_back(k);
  std::vector<std::string> header{"Fold", "Hyperparameters", "Train " + r.target_metric};
  header.insert(header.end(), metric_names.begin(), metric_names.end());
  rows.push_back(header);
  for (std::size_t i = 0; i < r.folds.size(); ++i) {
    const auto& f = r.folds[i];
    std::string params;
    for (const auto& [k, v] : f.best.values) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%s=%g", params.empty() ? "" : " ", k.c_str(), v);
      params += buf;
    }
    std::vector<std::string> row{std::to_string(i + 1), params.empty() ? "-" : params,
                                 fixed3(f.train_objective)};
    for (const auto& name : metric_names) {
      auto it = f.test_metrics.find(name);
      row.push_back(it == f.test_metrics.end() ? "-" : fixed3(it->second));
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> mean{"mean", "", ""};
  for (const auto& name : metric_names) mean.push_back(fixed3(r.mean_test_metrics.at(name)));
  rows.push_back(std::move(mean));
  return table(rows);
}

}  // namespace papeo::experiments
