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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "papeo/embedding.hpp"
#include "papeo/model.hpp"

namespace papeo::linking {

/// How p_forward weighs the move from passage i to passage j.
enum class TransitionModel {
  /// Every in-order target (j >= i) weighs p_forward, every reverse target
  /// 1 - p_forward, however many passages lie in each direction.
  per_direction,
  /// p_forward split evenly over the in-order targets and 1 - p_forward over
  /// the reverse ones; from passage 0 all mass is in-order.
  uniform,
};

std::string_view to_string(TransitionModel m);
TransitionModel transition_model_from_string(std::string_view s);

struct LinkerConfig {
  /// Likelihood of an in-order move (staying or moving forward).
  double p_forward = 0.6;
  TransitionModel transition = TransitionModel::per_direction;
  std::size_t top_k = 5;
  std::string embedder = "builtin";
  /// On EmbedError, score with ROUGE-L only instead of failing.
  bool rouge_only_fallback = true;
};

void check(const LinkerConfig& cfg);  // InputError when out of range

/// LCS-based ROUGE-L F-measure over token lists.
double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

/// Longest common subsequence length.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Cosine of the provider vectors of a and b, clamped to [0, 1]. The pair
/// itself is the fitting corpus.
double embed_similarity(std::string_view a, std::string_view b,
                        const EmbeddingProvider& provider);

/// embed_similarity + rouge_l(tokens(seg), tokens(passage)); in [0, 2].
double combined_score(std::string_view segment_text, std::string_view passage_text,
                      const EmbeddingProvider& provider);

enum class Measure { embed, rouge, combined };

/// Segment x passage affinities. Columns are the passages that carry text
/// (non-empty token list); other passages are not states.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::string> passage_ids;        // per column
  std::vector<std::size_t> passage_indices;    // per column, into the paper
  std::vector<double> embed;                   // row-major
  std::vector<double> rouge;
  std::vector<double> combined;
  std::vector<double> emissions;               // rows sum to 1
  bool degraded = false;                       // embed scores unavailable

  double at(const std::vector<double>& m, std::size_t r, std::size_t c) const {
    return m[r * cols + c];
  }
  const std::vector<double>& measure(Measure m) const;
};

/// Row-sum normalization; an all-zero row becomes uniform.
std::vector<double> normalize_rows(std::span<const double> values, std::size_t rows,
                                   std::size_t cols);

/// Scores every segment text against every text passage. The provider is
/// fitted on all passage and segment texts. `provider` may be null, which
/// scores ROUGE-L only and marks the matrix degraded. Emissions come from
/// `emission_measure` (combined by default). InputError when there is no
/// segment or no text passage.
ScoreMatrix score_matrix(std::span<const std::string> segment_texts, const PaperDocument& paper,
                         const EmbeddingProvider* provider, const LinkerConfig& cfg,
                         Measure emission_measure = Measure::combined);

struct RankedPassage {
  std::size_t column = 0;
  double score = 0.0;  // log max-product score of the best path through it
};

struct AlignmentResult {
  std::vector<std::size_t> path;                     // column per segment
  std::vector<std::vector<RankedPassage>> rankings;  // top_k per segment
  double best_log_score = 0.0;
};

/// Log transition weight from column `from` to column `to` among `cols` states.
double log_transition(std::size_t from, std::size_t to, std::size_t cols, double p_forward,
                      TransitionModel model = TransitionModel::per_direction);

/// Order-aware alignment. `emissions` is rows x cols, row-major. The path is
/// the lexicographically smallest max-product path; rankings[s] starts with
/// path[s], then columns by constrained score (ties to lower index).
AlignmentResult viterbi_align(std::span<const double> emissions, std::size_t rows,
                              std::size_t cols, double p_forward, std::size_t top_k,
                              TransitionModel model = TransitionModel::per_direction);

AlignmentResult viterbi_align(const ScoreMatrix& matrix, const LinkerConfig& cfg);

/// Ranks columns by one measure alone (no transitions); ties to lower index.
std::vector<std::vector<RankedPassage>> rank_by_measure(const ScoreMatrix& matrix, Measure m,
                                                        std::size_t top_k);

struct Suggestion {
  std::string passage_id;
  double score = 0.0;
};

struct SuggestResult {
  std::vector<Suggestion> suggestions;
  bool degraded = false;
};

/// Transcript text of every segment in timeline order.
std::vector<std::string> segment_texts(const PapeoDoc& doc);

/// Viterbi rankings for every segment of the doc, as passage ids.
std::vector<SuggestResult> suggest_all(const PapeoDoc& doc, const LinkerConfig& cfg,
                                       const EmbeddingProvider* provider);

/// Top-k passages for one segment. NotFound for an unknown segment.
SuggestResult suggest(const PapeoDoc& doc, std::string_view segment_id, const LinkerConfig& cfg,
                      const EmbeddingProvider* provider);

/// First paragraph of each section, sections keyed by full section path in
/// order of first appearance. Sections without a paragraph are skipped.
std::vector<std::size_t> section_first_paragraphs(const PaperDocument& paper);

/// Per segment, up to k distinct sections drawn uniformly without
/// replacement; entries are passage indices into the paper. The draw for
/// segment s depends only on (seed, s).
std::vector<std::vector<std::size_t>> baseline_random_rankings(const PaperDocument& paper,
                                                               std::size_t num_segments,
                                                               std::size_t k,
                                                               std::uint64_t seed);

/// One passage index per segment: the first paragraph of a random section.
std::vector<std::size_t> baseline_random_section(const PaperDocument& paper,
                                                 std::size_t num_segments, std::uint64_t seed);

}  // namespace papeo::linking
