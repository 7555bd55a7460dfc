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
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "papeo/errors.hpp"
#include "papeo/evaluation.hpp"

using namespace papeo;
using namespace papeo::evaluation;
using Times = std::vector<Millis>;

namespace {

Times ms(std::initializer_list<long> v) {
  Times out;
  for (long x : v) out.push_back(Millis{x});
  return out;
}

}  // namespace

TEST_CASE("matching prefers cardinality over nearest pairs") {
  // Greedy nearest-first would pair 4 with 3 and leave 0 and 7 unmatched.
  const auto m = match_boundaries(ms({0, 4}), ms({3, 7}), Millis{3});
  CHECK(m.size() == 2);
}

TEST_CASE("matching is one-to-one and within tolerance") {
  const auto pred = ms({1000, 1100, 5000});
  const auto truth = ms({1050, 9000});
  const auto m = match_boundaries(pred, truth, Millis{3000});
  REQUIRE(m.size() == 1);
  CHECK(std::abs((pred[m[0].first] - truth[m[0].second]).count()) <= 3000);
  CHECK(match_boundaries(ms({0}), ms({3001}), Millis{3000}).empty());
  CHECK(match_boundaries(ms({0}), ms({3000}), Millis{3000}).size() == 1);
}

TEST_CASE("matching size equals the exhaustive optimum") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    Times pred(rng() % 7), truth(rng() % 7);
    for (auto& t : pred) t = Millis{static_cast<long>(rng() % 30)};
    for (auto& t : truth) t = Millis{static_cast<long>(rng() % 30)};
    std::sort(pred.begin(), pred.end());
    std::sort(truth.begin(), truth.end());
    const Millis tol{static_cast<long>(rng() % 6)};
    CHECK(match_boundaries(pred, truth, tol).size() ==
          testing::max_matching_oracle(pred, truth, tol));
  }
}

TEST_CASE("f-beta") {
  CHECK(f_beta(0.5, 0.5, 1) == doctest::Approx(0.5));
  CHECK(f_beta(1.0, 0.5, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(f_beta(0.25, 1.0, 3) == doctest::Approx(10.0 * 0.25 / (9.0 * 0.25 + 1.0)));
  CHECK(f_beta(0, 0, 2) == 0.0);
  CHECK(f_beta(0.2, 0.8, 3) > f_beta(0.2, 0.8, 1));
  CHECK(f_beta(0.8, 0.2, 3) < f_beta(0.8, 0.2, 1));
}

TEST_CASE("boundary scores") {
  EvalConfig cfg;
  const auto s = score_boundaries(ms({1000, 20000, 40000}), ms({2000, 40500}), cfg);
  CHECK(s.matches == 2);
  CHECK(s.precision == doctest::Approx(2.0 / 3.0));
  CHECK(s.recall == 1.0);
  CHECK(s.f.at(1.0) == doctest::Approx(0.8));
  CHECK(s.f.size() == 3);

  const auto both_empty = score_boundaries({}, {}, cfg);
  CHECK(both_empty.precision == 1.0);
  CHECK(both_empty.recall == 1.0);
  const auto no_pred = score_boundaries({}, ms({5}), cfg);
  CHECK(no_pred.precision == 0.0);
  CHECK(no_pred.recall == 0.0);
}

TEST_CASE("macro average") {
  EvalConfig cfg;
  cfg.betas = {1.0};
  const std::vector<BoundaryScores> per{score_boundaries(ms({0}), ms({0}), cfg),
                                        score_boundaries(ms({0}), ms({90000}), cfg)};
  const auto m = macro_average(per);
  CHECK(m.precision == doctest::Approx(0.5));
  CHECK(m.recall == doctest::Approx(0.5));
  CHECK(m.f.at(1.0) == doctest::Approx(0.5));
}

TEST_CASE("top-k accuracy") {
  const Rankings r{{"s1", {"p1", "p2"}}, {"s2", {"p3", "p1"}}, {"s3", {"p2", "p3"}}};
  const std::vector<PassageLink> truth{{"s1", {"p1"}}, {"s2", {"p1", "p4"}}, {"s3", {"p9"}}};
  CHECK(link_topk_accuracy(r, truth, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(link_topk_accuracy(r, truth, 2) == doctest::Approx(2.0 / 3.0));
  // Per passage: p1 hit, p1 hit, p4 miss, p9 miss.
  CHECK(link_topk_accuracy(r, truth, 2, TopKCounting::per_link_passage) ==
        doctest::Approx(0.5));
  const std::vector<PassageLink> orphan{{"s7", {"p1"}}};
  CHECK_THROWS_AS((void)link_topk_accuracy(r, orphan, 1), InputError);
}

TEST_CASE("config checks") {
  EvalConfig cfg;
  CHECK_NOTHROW(check(cfg));
  cfg.train_fraction = 0;
  CHECK_THROWS_AS(check(cfg), InputError);
  cfg = {};
  cfg.betas = {-1};
  CHECK_THROWS_AS(check(cfg), InputError);
  cfg = {};
  cfg.folds = 0;
  CHECK_THROWS_AS(check(cfg), InputError);
}

TEST_CASE("cartesian grid") {
  const auto g = cartesian_grid({{"a", {1, 2}}, {"b", {10, 20, 30}}});
  REQUIRE(g.size() == 6);
  CHECK(g[0].get("a") == 1);
  CHECK(g[1].get("b") == 20);
  CHECK(g[3].get("a") == 2);
  CHECK_THROWS((void)g[0].get("c"));
}

TEST_CASE("default folds: train splits partition the pairs") {
  EvalConfig cfg;
  cfg.seed = 5;
  const auto folds = fold_splits(8, cfg);
  REQUIRE(folds.size() == 4);
  std::multiset<std::size_t> trains;
  for (const auto& f : folds) {
    CHECK(f.train.size() == 2);
    CHECK(f.test.size() == 6);
    std::set<std::size_t> all(f.train.begin(), f.train.end());
    all.insert(f.test.begin(), f.test.end());
    CHECK(all.size() == 8);
    trains.insert(f.train.begin(), f.train.end());
  }
  CHECK(trains == std::multiset<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(fold_splits(8, cfg)[2].train == folds[2].train);
  CHECK_THROWS_AS((void)fold_splits(3, cfg), InputError);
}

TEST_CASE("grid search picks the planted optimum and keeps the first tie") {
  const auto grid = cartesian_grid({{"x", {1, 2, 3, 4, 5}}});
  const Evaluator eval = [](const GridPoint& g, std::span<const std::size_t> pairs) {
    MetricMap m;
    const double x = g.get("x");
    m["score"] = x >= 3 ? 1.0 : 0.1 * x;  // 3, 4, 5 tie
    m["pairs"] = static_cast<double>(pairs.size());
    return m;
  };
  EvalConfig cfg;
  const auto r1 = grid_search_cv(8, grid, "score", cfg, eval, 1);
  const auto r4 = grid_search_cv(8, grid, "score", cfg, eval, 4);
  REQUIRE(r1.folds.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(r1.folds[k].best.get("x") == 3);
    CHECK(r1.folds[k].train_objective == 1.0);
    CHECK(r1.folds[k].test_metrics.at("pairs") == 6);
    CHECK(r4.folds[k].best == r1.folds[k].best);
  }
  CHECK(r1.mean_test_metrics.at("score") == 1.0);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}
