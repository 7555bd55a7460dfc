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
#include <optional>
#include <string>
#include <vector>

#include "papeo/evaluation.hpp"
#include "papeo/image.hpp"
#include "papeo/json_io.hpp"
#include "papeo/linking.hpp"
#include "papeo/segmentation.hpp"

namespace papeo::experiments {

/// One paper/video pair with its hand-authored ground truth.
struct EvalPair {
  std::string name;
  PaperDocument paper;
  std::vector<TranscriptLine> transcript;
  std::vector<FrameRecord> frames;  // empty when no frames manifest
  PapeoDoc truth;
};

/// Reads a dataset manifest: a JSON array of
/// `{layout_file, transcript_file, frames_manifest?, ground_truth_papeo}`,
/// paths relative to the manifest.
std::vector<EvalPair> load_dataset(const std::filesystem::path& manifest);

/// Boundaries strictly inside (0, duration): segment starts and ends.
std::vector<Millis> truth_boundaries(const PapeoDoc& truth);
std::vector<Millis> interior(std::vector<Millis> boundaries, Millis duration);

/// Boundaries a segmentation method predicts for one pair.
std::vector<Millis> predict_boundaries(const EvalPair& pair, segmentation::Method method,
                                       const segmentation::SegmenterConfig& cfg);

struct SegmentationReport {
  std::string method;
  std::vector<std::string> pair_names;
  std::vector<evaluation::BoundaryScores> per_pair;
  evaluation::BoundaryScores macro;
};

SegmentationReport evaluate_segmentation(const std::vector<EvalPair>& pairs,
                                         std::span<const std::size_t> subset,
                                         segmentation::Method method,
                                         const segmentation::SegmenterConfig& seg_cfg,
                                         const evaluation::EvalConfig& cfg);

enum class LinkMethod { random_section, embed, rouge, combined, viterbi };

std::string_view to_string(LinkMethod m);
LinkMethod link_method_from_string(std::string_view s);

/// Per-pair score matrix over the ground-truth segments; independent of
/// p_forward, so grid searches compute it once.
struct LinkingCase {
  linking::ScoreMatrix matrix;
  std::vector<std::string> segment_ids;
  std::vector<PassageLink> truth_links;  // only links of scored segments
};

LinkingCase prepare_linking_case(const EvalPair& pair, const linking::LinkerConfig& cfg,
                                 const linking::EmbeddingProvider* provider);

/// Rankings (passage ids) of one method on a prepared case.
evaluation::Rankings rank_case(const EvalPair& pair, const LinkingCase& c, LinkMethod method,
                               const linking::LinkerConfig& cfg, std::size_t depth,
                               std::uint64_t seed);

struct LinkingReport {
  std::string method;
  std::vector<std::string> pair_names;
  std::vector<std::map<std::size_t, double>> per_pair;  // k -> accuracy
  std::map<std::size_t, double> macro;
};

LinkingReport evaluate_linking(const std::vector<EvalPair>& pairs,
                               const std::vector<LinkingCase>& cases,
                               std::span<const std::size_t> subset, LinkMethod method,
                               const linking::LinkerConfig& link_cfg,
                               const evaluation::EvalConfig& cfg);

/// Grid search over (threshold, min_segment_s) for HSV / template methods,
/// maximizing F3 on the train split. Metrics: precision, recall, f<beta>.
evaluation::CvResult grid_search_segmentation(const std::vector<EvalPair>& pairs,
                                              segmentation::Method method,
                                              const std::vector<double>& thresholds,
                                              const std::vector<double>& min_segment_s,
                                              const segmentation::SegmenterConfig& base,
                                              const evaluation::EvalConfig& cfg,
                                              std::size_t jobs = 1);

/// Grid search over p_forward for the Viterbi linker, maximizing top-1.
/// Metrics: top<k> for every configured k.
evaluation::CvResult grid_search_linking(const std::vector<EvalPair>& pairs,
                                         const std::vector<LinkingCase>& cases,
                                         const std::vector<double>& p_forward,
                                         const linking::LinkerConfig& base,
                                         const evaluation::EvalConfig& cfg,
                                         std::size_t jobs = 1);

Json to_json(const SegmentationReport& r);
Json to_json(const LinkingReport& r);
Json to_json(const evaluation::CvResult& r);

/// Aligned-column text tables in the layout of the published result tables.
std::string format_segmentation_table(const std::vector<SegmentationReport>& reports,
                                      const std::vector<double>& betas);
std::string format_linking_table(const std::vector<LinkingReport>& reports,
                                 const std::vector<std::size_t>& k_values);
std::string format_cv_table(const evaluation::CvResult& r);

}  // namespace papeo::experiments
