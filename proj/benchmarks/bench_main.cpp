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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "papeo/image.hpp"
#include "papeo/linking.hpp"
#include "papeo/segmentation.hpp"

namespace {

using namespace papeo;

const std::vector<std::string> kWords{"tide", "pool", "survey", "species", "count", "offline",
                                      "tablet", "volunteer", "battery", "season", "site", "the",
                                      "a", "of", "and", "we", "record", "photo"};

std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::string> out(n);
  for (auto& w : out) w = kWords[rng() % kWords.size()];
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) s += (s.empty() ? "" : " ") + t;
  return s;
}

void BM_RougeL(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_tokens(rng, n);
  const auto b = random_tokens(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(linking::rouge_l(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RougeL)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Viterbi(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto cols = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> raw(rows * cols);
  for (auto& x : raw) x = u(rng);
  const auto emissions = linking::normalize_rows(raw, rows, cols);
  for (auto _ : state) {
    benchmark::DoNotOptimize(linking::viterbi_align(emissions, rows, cols, 0.8, 5));
  }
}
BENCHMARK(BM_Viterbi)->Args({20, 50})->Args({60, 150})->Args({120, 300});

void BM_ScoreMatrix(benchmark::State& state) {
  std::mt19937_64 rng(3);
  PaperDocument paper;
  for (int i = 0; i < state.range(1); ++i) {
    Passage p;
    p.id = "p" + std::to_string(i + 1);
    p.text = join(random_tokens(rng, 60));
    paper.passages.push_back(std::move(p));
  }
  std::vector<std::string> segments;
  for (int i = 0; i < state.range(0); ++i) segments.push_back(join(random_tokens(rng, 40)));
  const linking::TfidfProvider provider;
  const linking::LinkerConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linking::score_matrix(segments, paper, &provider, cfg));
  }
}
BENCHMARK(BM_ScoreMatrix)->Args({20, 50})->Args({60, 150})->Unit(benchmark::kMillisecond);

void BM_HsvFrameDelta(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const int h = w * 9 / 16;
  RgbImage a(w, h), b(w, h);
  std::mt19937_64 rng(4);
  for (auto& px : a.pixels) px = static_cast<std::uint8_t>(rng());
  for (auto& px : b.pixels) px = static_cast<std::uint8_t>(rng());
  for (auto _ : state) benchmark::DoNotOptimize(segmentation::hsv_frame_delta(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.pixel_count()));
}
BENCHMARK(BM_HsvFrameDelta)->Arg(320)->Arg(1280);

}  // namespace

BENCHMARK_MAIN();
