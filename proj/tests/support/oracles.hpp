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

#include <cstddef>
#include <string>
#include <vector>

#include "papeo/image.hpp"
#include "papeo/linking.hpp"
#include "papeo/model.hpp"

namespace papeo::testing {

/// Best log score of every (segment, column) over all paths, found by
/// enumerating the cols^rows paths.
struct BruteForceAlignment {
  std::vector<std::size_t> path;          // lexicographically smallest within `tie_eps`
  double best = 0.0;
  std::vector<double> constrained;        // rows x cols: best path score through (s, j)
};

BruteForceAlignment brute_force_viterbi(const std::vector<double>& emissions, std::size_t rows,
                                        std::size_t cols, double p_forward,
                                        linking::TransitionModel model =
                                            linking::TransitionModel::per_direction,
                                        double tie_eps = 1e-9);

/// LCS length by trying every subsequence of `a`.
std::size_t subsequence_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// ROUGE-L F from the exhaustive LCS.
double rouge_l_oracle(const std::vector<std::string>& candidate,
                      const std::vector<std::string>& reference);

/// Maximum one-to-one matching size within the tolerance, by exhaustive search.
std::size_t max_matching_oracle(const std::vector<Millis>& predicted,
                                const std::vector<Millis>& truth, Millis tolerance);

/// NCC of BT.601 luma, straight from the definition.
double ncc_oracle(const RgbImage& a, const RgbImage& b);

}  // namespace papeo::testing
