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

#include "papeo/linking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "papeo/errors.hpp"
#include "papeo/text.hpp"

namespace papeo::linking {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr double kEmissionFloor = 1e-9;

double safe_log(double x) { return x > 0 ? std::log(x) : kNegInf; }

// Log scores closer than this are ties; summation order alone can separate
// equal products by a few ulps.
constexpr double kTieEps = 1e-9;

std::size_t first_near_max(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] >= m - kTieEps) return j;
  }
  return 0;
}

std::vector<RankedPassage> sort_ranking(std::vector<RankedPassage> all, std::size_t top_k) {
  std::stable_sort(all.begin(), all.end(), [](const RankedPassage& a, const RankedPassage& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.column < b.column;
  });
  if (all.size() > top_k) all.resize(top_k);
  return all;
}

}  // namespace

void check(const LinkerConfig& cfg) {
  if (!(cfg.p_forward >= 0.0 && cfg.p_forward <= 1.0)) {
    throw InputError("p_forward must be in [0, 1]");
  }
  if (cfg.top_k < 1) throw InputError("top_k must be >= 1");
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  const std::size_t lcs = lcs_length(candidate, reference);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

double embed_similarity(std::string_view a, std::string_view b,
                        const EmbeddingProvider& provider) {
  const std::vector<std::string> texts{std::string(a), std::string(b)};
  auto vectors = provider.embed(texts, texts);
  if (vectors.size() != 2) throw EmbedError("provider returned wrong number of vectors");
  return std::clamp(cosine(vectors[0], vectors[1]), 0.0, 1.0);
}

double combined_score(std::string_view segment_text, std::string_view passage_text,
                      const EmbeddingProvider& provider) {
  const auto seg = text::tokenize(segment_text);
  const auto passage = text::tokenize(passage_text);
  return embed_similarity(segment_text, passage_text, provider) + rouge_l(seg, passage);
}

const std::vector<double>& ScoreMatrix::measure(Measure m) const {
  switch (m) {
    case Measure::embed: return embed;
    case Measure::rouge: return rouge;
    case Measure::combined: return combined;
  }
  return combined;
}

std::vector<double> normalize_rows(std::span<const double> values, std::size_t rows,
                                   std::size_t cols) {
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0;
    for (std::size_t c = 0; c < cols; ++c) sum += out[r * cols + c];
    for (std::size_t c = 0; c < cols; ++c) {
      out[r * cols + c] = sum > 0 ? out[r * cols + c] / sum : 1.0 / static_cast<double>(cols);
    }
  }
  return out;
}

ScoreMatrix score_matrix(std::span<const std::string> segment_texts, const PaperDocument& paper,
                         const EmbeddingProvider* provider, const LinkerConfig& cfg,
                         Measure emission_measure) {
  check(cfg);
  if (segment_texts.empty()) throw InputError("score matrix needs at least one segment");
  ScoreMatrix m;
  std::vector<std::vector<std::string>> passage_tokens;
  std::vector<std::string> passage_texts;
  for (std::size_t i = 0; i < paper.passages.size(); ++i) {
    auto tokens = text::tokenize(paper.passages[i].text);
    if (tokens.empty()) continue;
    m.passage_ids.push_back(paper.passages[i].id);
    m.passage_indices.push_back(i);
    passage_tokens.push_back(std::move(tokens));
    passage_texts.push_back(paper.passages[i].text);
  }
  if (m.passage_ids.empty()) throw InputError("paper has no text passages to link");
  m.rows = segment_texts.size();
  m.cols = m.passage_ids.size();
  const std::size_t cells = m.rows * m.cols;
  m.embed.assign(cells, 0.0);
  m.rouge.assign(cells, 0.0);

  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto seg_tokens = text::tokenize(segment_texts[r]);
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.rouge[r * m.cols + c] = rouge_l(seg_tokens, passage_tokens[c]);
    }
  }

  if (provider) {
    std::vector<std::string> all(passage_texts.begin(), passage_texts.end());
    all.insert(all.end(), segment_texts.begin(), segment_texts.end());
    auto vectors = provider->embed(all, all);
    if (vectors.size() != all.size()) throw EmbedError("provider returned wrong number of vectors");
    for (std::size_t r = 0; r < m.rows; ++r) {
      for (std::size_t c = 0; c < m.cols; ++c) {
        m.embed[r * m.cols + c] = std::clamp(cosine(vectors[m.cols + r], vectors[c]), 0.0, 1.0);
      }
    }
  } else {
    m.degraded = true;
  }

  m.combined.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) m.combined[i] = m.embed[i] + m.rouge[i];
  // Floor keeps zero-affinity passages reachable so every ranking score is finite.
  std::vector<double> floored = m.measure(emission_measure);
  for (auto& v : floored) v += kEmissionFloor;
  m.emissions = normalize_rows(floored, m.rows, m.cols);
  return m;
}

std::string_view to_string(TransitionModel m) {
  return m == TransitionModel::uniform ? "uniform" : "per-direction";
}

TransitionModel transition_model_from_string(std::string_view s) {
  if (s == "per-direction") return TransitionModel::per_direction;
  if (s == "uniform") return TransitionModel::uniform;
  throw InputError("unknown transition model '" + std::string(s) + "'");
}

double log_transition(std::size_t from, std::size_t to, std::size_t cols, double p_forward,
                      TransitionModel model) {
  if (model == TransitionModel::per_direction) {
    return to >= from ? safe_log(p_forward) : safe_log(1.0 - p_forward);
  }
  const std::size_t forward = cols - from;  // targets j >= from
  const std::size_t backward = from;        // targets j < from
  if (backward == 0) return -std::log(static_cast<double>(forward));
  if (to >= from) return safe_log(p_forward / static_cast<double>(forward));
  return safe_log((1.0 - p_forward) / static_cast<double>(backward));
}

AlignmentResult viterbi_align(std::span<const double> emissions, std::size_t rows,
                              std::size_t cols, double p_forward, std::size_t top_k,
                              TransitionModel model) {
  if (rows == 0 || cols == 0 || emissions.size() != rows * cols) {
    throw InputError("emission matrix shape mismatch");
  }
  if (!(p_forward >= 0.0 && p_forward <= 1.0)) throw InputError("p_forward must be in [0, 1]");
  if (top_k < 1) throw InputError("top_k must be >= 1");

  std::vector<double> log_e(emissions.size());
  std::transform(emissions.begin(), emissions.end(), log_e.begin(), safe_log);
  std::vector<double> log_t(cols * cols);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < cols; ++j) log_t[i * cols + j] = log_transition(i, j, cols, p_forward, model);
  }
  const double log_prior = -std::log(static_cast<double>(cols));

  // alpha: best score of a prefix ending in (s, j), emission included.
  // beta: best score of the suffix after (s, j), excluding (s, j) itself.
  std::vector<double> alpha(rows * cols, kNegInf), beta(rows * cols, kNegInf);
  for (std::size_t j = 0; j < cols; ++j) alpha[j] = log_prior + log_e[j];
  for (std::size_t s = 1; s < rows; ++s) {
    for (std::size_t j = 0; j < cols; ++j) {
      double best = kNegInf;
      for (std::size_t i = 0; i < cols; ++i) {
        best = std::max(best, alpha[(s - 1) * cols + i] + log_t[i * cols + j]);
      }
      alpha[s * cols + j] = best + log_e[s * cols + j];
    }
  }
  for (std::size_t j = 0; j < cols; ++j) beta[(rows - 1) * cols + j] = 0.0;
  for (std::size_t s = rows - 1; s-- > 0;) {
    for (std::size_t i = 0; i < cols; ++i) {
      double best = kNegInf;
      for (std::size_t j = 0; j < cols; ++j) {
        best = std::max(best, log_t[i * cols + j] + log_e[(s + 1) * cols + j] +
                                  beta[(s + 1) * cols + j]);
      }
      beta[s * cols + i] = best;
    }
  }

  // Forward reconstruction from the suffix scores picks the lowest index
  // among equally good continuations, giving the lexicographically smallest
  // optimal path.
  AlignmentResult result;
  result.path.resize(rows);
  std::vector<double> first(cols);
  for (std::size_t j = 0; j < cols; ++j) first[j] = log_prior + log_e[j] + beta[j];
  result.path[0] = first_near_max(first);
  const double best = *std::max_element(first.begin(), first.end());
  result.best_log_score = best;
  std::vector<double> step(cols);
  for (std::size_t s = 1; s < rows; ++s) {
    const std::size_t prev = result.path[s - 1];
    for (std::size_t j = 0; j < cols; ++j) {
      step[j] = log_t[prev * cols + j] + log_e[s * cols + j] + beta[s * cols + j];
    }
    result.path[s] = first_near_max(step);
  }

  result.rankings.resize(rows);
  for (std::size_t s = 0; s < rows; ++s) {
    std::vector<RankedPassage> others;
    for (std::size_t j = 0; j < cols; ++j) {
      if (j == result.path[s]) continue;
      const double constrained = alpha[s * cols + j] + beta[s * cols + j];
      others.push_back({j, std::min(constrained, best)});
    }
    auto ranked = sort_ranking(std::move(others), top_k > 0 ? top_k - 1 : 0);
    auto& out = result.rankings[s];
    out.push_back({result.path[s], best});
    out.insert(out.end(), ranked.begin(), ranked.end());
  }
  return result;
}

AlignmentResult viterbi_align(const ScoreMatrix& matrix, const LinkerConfig& cfg) {
  check(cfg);
  return viterbi_align(matrix.emissions, matrix.rows, matrix.cols, cfg.p_forward, cfg.top_k,
                       cfg.transition);
}

std::vector<std::vector<RankedPassage>> rank_by_measure(const ScoreMatrix& matrix, Measure m,
                                                        std::size_t top_k) {
  const auto& values = matrix.measure(m);
  std::vector<std::vector<RankedPassage>> out(matrix.rows);
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    std::vector<RankedPassage> row;
    for (std::size_t c = 0; c < matrix.cols; ++c) row.push_back({c, matrix.at(values, r, c)});
    out[r] = sort_ranking(std::move(row), top_k);
  }
  return out;
}

std::vector<std::string> segment_texts(const PapeoDoc& doc) {
  std::vector<std::string> texts;
  texts.reserve(doc.segments.size());
  for (const auto& s : doc.segments) texts.push_back(segment_text(doc, s));
  return texts;
}

std::vector<SuggestResult> suggest_all(const PapeoDoc& doc, const LinkerConfig& cfg,
                                       const EmbeddingProvider* provider) {
  const auto texts = segment_texts(doc);
  ScoreMatrix matrix;
  try {
    matrix = score_matrix(texts, doc.paper, provider, cfg);
  } catch (const EmbedError&) {
    if (!cfg.rouge_only_fallback) throw;
    matrix = score_matrix(texts, doc.paper, nullptr, cfg);
  }
  const auto alignment = viterbi_align(matrix, cfg);
  std::vector<SuggestResult> out(matrix.rows);
  for (std::size_t s = 0; s < matrix.rows; ++s) {
    out[s].degraded = matrix.degraded;
    for (const auto& r : alignment.rankings[s]) {
      out[s].suggestions.push_back({matrix.passage_ids[r.column], r.score});
    }
  }
  return out;
}

SuggestResult suggest(const PapeoDoc& doc, std::string_view segment_id, const LinkerConfig& cfg,
                      const EmbeddingProvider* provider) {
  std::size_t index = doc.segments.size();
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    if (doc.segments[i].id == segment_id) index = i;
  }
  if (index == doc.segments.size()) {
    throw NotFound("unknown segment '" + std::string(segment_id) + "'");
  }
  return suggest_all(doc, cfg, provider)[index];
}

std::vector<std::size_t> section_first_paragraphs(const PaperDocument& paper) {
  std::vector<std::vector<std::string>> sections;
  std::vector<std::optional<std::size_t>> first;
  for (std::size_t i = 0; i < paper.passages.size(); ++i) {
    const auto& p = paper.passages[i];
    auto it = std::find(sections.begin(), sections.end(), p.section_path);
    std::size_t k = static_cast<std::size_t>(it - sections.begin());
    if (it == sections.end()) {
      sections.push_back(p.section_path);
      first.emplace_back();
    }
    if (!first[k] && p.kind == PassageKind::paragraph) first[k] = i;
  }
  std::vector<std::size_t> out;
  for (const auto& f : first) {
    if (f) out.push_back(*f);
  }
  return out;
}

std::vector<std::vector<std::size_t>> baseline_random_rankings(const PaperDocument& paper,
                                                               std::size_t num_segments,
                                                               std::size_t k,
                                                               std::uint64_t seed) {
  const auto firsts = section_first_paragraphs(paper);
  if (firsts.empty()) throw InputError("paper has no section with a paragraph");
  std::vector<std::vector<std::size_t>> out(num_segments);
  for (std::size_t s = 0; s < num_segments; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> pool = firsts;
    const std::size_t take = std::min(k, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      out[s].push_back(pool[i]);
    }
  }
  return out;
}

std::vector<std::size_t> baseline_random_section(const PaperDocument& paper,
                                                 std::size_t num_segments, std::uint64_t seed) {
  std::vector<std::size_t> out;
  for (auto& ranking : baseline_random_rankings(paper, num_segments, 1, seed)) {
    out.push_back(ranking.front());
  }
  return out;
}

}  // namespace papeo::linking
