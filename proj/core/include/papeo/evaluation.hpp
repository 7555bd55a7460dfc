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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "papeo/model.hpp"

namespace papeo::evaluation {

enum class TopKCounting {
  per_segment_any,   // a segment hits when any truth passage is in its top-k
  per_link_passage,  // each (segment, truth passage) pair counts on its own
};

struct EvalConfig {
  Millis tolerance{3000};
  std::vector<double> betas{1.0, 2.0, 3.0};
  std::vector<std::size_t> k_values{1, 5};
  std::size_t folds = 4;
  double train_fraction = 0.25;
  std::uint64_t seed = 0;
  TopKCounting counting = TopKCounting::per_segment_any;
};

void check(const EvalConfig& cfg);  // InputError when out of range

/// One-to-one matching of sorted predicted and truth boundaries within the
/// tolerance. Returns (predicted index, truth index) pairs. The sweep matches
/// the earliest unmatched candidates first, which attains the maximum
/// matching size for equal-width tolerance windows.
std::vector<std::pair<std::size_t, std::size_t>> match_boundaries(
    std::span<const Millis> predicted, std::span<const Millis> truth, Millis tolerance);

/// (1 + b^2) p r / (b^2 p + r), 0 when the denominator is 0.
double f_beta(double precision, double recall, double beta);

struct BoundaryScores {
  std::size_t matches = 0;
  std::size_t predicted = 0;
  std::size_t truth = 0;
  double precision = 0.0;
  double recall = 0.0;
  std::map<double, double> f;  // beta -> F-beta
};

/// Precision = matches / |predicted|, recall = matches / |truth|. An empty
/// side scores 1 when both sides are empty and 0 otherwise.
BoundaryScores score_boundaries(std::span<const Millis> predicted, std::span<const Millis> truth,
                                const EvalConfig& cfg);

/// Mean of per-pair precision, recall and F-beta.
BoundaryScores macro_average(std::span<const BoundaryScores> per_pair);

/// segment id -> ranked passage ids
using Rankings = std::map<std::string, std::vector<std::string>>;

/// Top-k accuracy over the segments of `truth_links`. InputError when a
/// truth segment has no ranking.
double link_topk_accuracy(const Rankings& rankings, std::span<const PassageLink> truth_links,
                          std::size_t k,
                          TopKCounting counting = TopKCounting::per_segment_any);

// --- cross-validated grid search ---------------------------------------

using MetricMap = std::map<std::string, double>;

struct GridPoint {
  std::vector<std::pair<std::string, double>> values;
  double get(const std::string& name) const;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Cartesian product of the axes, first axis varying slowest.
std::vector<GridPoint> cartesian_grid(
    const std::vector<std::pair<std::string, std::vector<double>>>& axes);

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle of pair indices; fold k trains on round(train_fraction*N)
/// consecutive shuffled pairs starting at k*N/folds and tests on the rest.
/// InputError when there are fewer pairs than folds.
std::vector<FoldSplit> fold_splits(std::size_t num_pairs, const EvalConfig& cfg);

/// Scores a grid point on a subset of pairs.
using Evaluator = std::function<MetricMap(const GridPoint&, std::span<const std::size_t>)>;

struct FoldResult {
  FoldSplit split;
  GridPoint best;
  double train_objective = 0.0;
  MetricMap test_metrics;
};

struct CvResult {
  std::string target_metric;
  std::vector<FoldResult> folds;
  MetricMap mean_test_metrics;
};

/// Per fold: picks the grid point maximizing `target_metric` on the train
/// split (first grid point wins ties), then reports its metrics on the test
/// split. Grid points are scored on `jobs` worker threads; results do not
/// depend on `jobs`.
CvResult grid_search_cv(std::size_t num_pairs, const std::vector<GridPoint>& grid,
                        const std::string& target_metric, const EvalConfig& cfg,
                        const Evaluator& evaluate, std::size_t jobs = 1);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace papeo::evaluation
