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

#include "papeo/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "papeo/errors.hpp"

namespace papeo::evaluation {

void check(const EvalConfig& cfg) {
  if (cfg.tolerance.count() < 0) throw InputError("tolerance must be >= 0");
  for (double b : cfg.betas) {
    if (!(b > 0)) throw InputError("beta must be > 0");
  }
  for (auto k : cfg.k_values) {
    if (k < 1) throw InputError("k must be >= 1");
  }
  if (cfg.folds < 2) throw InputError("folds must be >= 2");
  if (!(cfg.train_fraction > 0 && cfg.train_fraction < 1)) {
    throw InputError("train_fraction must be in (0, 1)");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> match_boundaries(
    std::span<const Millis> predicted, std::span<const Millis> truth, Millis tolerance) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t i = 0, j = 0;
  while (i < predicted.size() && j < truth.size()) {
    if (truth[j] < predicted[i] - tolerance) {
      ++j;
    } else if (predicted[i] < truth[j] - tolerance) {
      ++i;
    } else {
      pairs.emplace_back(i++, j++);
    }
  }
  return pairs;
}

double f_beta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denom;
}

BoundaryScores score_boundaries(std::span<const Millis> predicted, std::span<const Millis> truth,
                                const EvalConfig& cfg) {
  BoundaryScores s;
  s.matches = match_boundaries(predicted, truth, cfg.tolerance).size();
  s.predicted = predicted.size();
  s.truth = truth.size();
  const bool both_empty = predicted.empty() && truth.empty();
  s.precision = predicted.empty() ? (both_empty ? 1.0 : 0.0)
                                  : static_cast<double>(s.matches) / static_cast<double>(s.predicted);
  s.recall = truth.empty() ? (both_empty ? 1.0 : 0.0)
                           : static_cast<double>(s.matches) / static_cast<double>(s.truth);
  for (double b : cfg.betas) s.f[b] = f_beta(s.precision, s.recall, b);
  return s;
}

BoundaryScores macro_average(std::span<const BoundaryScores> per_pair) {
  BoundaryScores avg;
  if (per_pair.empty()) return avg;
  const double n = static_cast<double>(per_pair.size());
  for (const auto& s : per_pair) {
    avg.matches += s.matches;
    avg.predicted += s.predicted;
    avg.truth += s.truth;
    avg.precision += s.precision / n;
    avg.recall += s.recall / n;
    for (const auto& [b, f] : s.f) avg.f[b] += f / n;
  }
  return avg;
}

double link_topk_accuracy(const Rankings& rankings, std::span<const PassageLink> truth_links,
                          std::size_t k, TopKCounting counting) {
  std::size_t hits = 0, total = 0;
  for (const auto& link : truth_links) {
    auto it = rankings.find(link.segment_id);
    if (it == rankings.end()) {
      throw InputError("no ranking for ground-truth segment '" + link.segment_id + "'");
    }
    const auto& ranked = it->second;
    const auto top_end = ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size()));
    auto in_top = [&](const std::string& pid) {
      return std::find(ranked.begin(), top_end, pid) != top_end;
    };
    if (counting == TopKCounting::per_segment_any) {
      ++total;
      if (std::any_of(link.passage_ids.begin(), link.passage_ids.end(), in_top)) ++hits;
    } else {
      for (const auto& pid : link.passage_ids) {
        ++total;
        if (in_top(pid)) ++hits;
      }
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double GridPoint::get(const std::string& name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  throw InputError("grid point has no parameter '" + name + "'");
}

std::vector<GridPoint> cartesian_grid(
    const std::vector<std::pair<std::string, std::vector<double>>>& axes) {
  std::vector<GridPoint> grid{GridPoint{}};
  for (const auto& [name, values] : axes) {
    if (values.empty()) throw InputError("grid axis '" + name + "' is empty");
    std::vector<GridPoint> next;
    for (const auto& point : grid) {
      for (double v : values) {
        GridPoint p = point;
        p.values.emplace_back(name, v);
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

std::vector<FoldSplit> fold_splits(std::size_t num_pairs, const EvalConfig& cfg) {
  check(cfg);
  if (num_pairs < cfg.folds) {
    throw InputError("dataset has " + std::to_string(num_pairs) + " pairs, fewer than " +
                     std::to_string(cfg.folds) + " folds");
  }
  std::vector<std::size_t> order(num_pairs);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(num_pairs))),
      1, num_pairs - 1);
  std::vector<FoldSplit> splits(cfg.folds);
  for (std::size_t k = 0; k < cfg.folds; ++k) {
    const std::size_t offset = k * num_pairs / cfg.folds;
    std::set<std::size_t> train;
    for (std::size_t i = 0; i < n_train; ++i) train.insert(order[(offset + i) % num_pairs]);
    for (auto idx : order) {
      (train.contains(idx) ? splits[k].train : splits[k].test).push_back(idx);
    }
    std::sort(splits[k].train.begin(), splits[k].train.end());
    std::sort(splits[k].test.begin(), splits[k].test.end());
  }
  return splits;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

CvResult grid_search_cv(std::size_t num_pairs, const std::vector<GridPoint>& grid,
                        const std::string& target_metric, const EvalConfig& cfg,
                        const Evaluator& evaluate, std::size_t jobs) {
  if (grid.empty()) throw InputError("empty hyperparameter grid");
  CvResult result;
  result.target_metric = target_metric;
  for (auto& split : fold_splits(num_pairs, cfg)) {
    std::vector<double> objective(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t g) {
      const auto metrics = evaluate(grid[g], split.train);
      auto it = metrics.find(target_metric);
      if (it == metrics.end()) throw InputError("evaluator did not report '" + target_metric + "'");
      objective[g] = it->second;
    });
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
      if (objective[g] > objective[best]) best = g;
    }
    FoldResult fold;
    fold.best = grid[best];
    fold.train_objective = objective[best];
    fold.test_metrics = evaluate(grid[best], split.test);
    fold.split = std::move(split);
    result.folds.push_back(std::move(fold));
  }
  for (const auto& fold : result.folds) {
    for (const auto& [name, value] : fold.test_metrics) {
      result.mean_test_metrics[name] += value / static_cast<double>(result.folds.size());
    }
  }
  return result;
}

}  // namespace papeo::evaluation
