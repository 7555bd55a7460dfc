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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace papeo::testing {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lg(double x) { return x > 0 ? std::log(x) : kNegInf; }

// Transition weight as a plain product-space value.
double transition(std::size_t from, std::size_t to, std::size_t cols, double p_forward,
                  linking::TransitionModel model) {
  if (model == linking::TransitionModel::per_direction) return to >= from ? p_forward : 1.0 - p_forward;
  if (from == 0) return 1.0 / static_cast<double>(cols);
  if (to >= from) return p_forward / static_cast<double>(cols - from);
  return (1.0 - p_forward) / static_cast<double>(from);
}

}  // namespace

BruteForceAlignment brute_force_viterbi(const std::vector<double>& emissions, std::size_t rows,
                                        std::size_t cols, double p_forward,
                                        linking::TransitionModel model, double tie_eps) {
  BruteForceAlignment out;
  out.best = kNegInf;
  out.constrained.assign(rows * cols, kNegInf);
  std::vector<std::size_t> path(rows, 0);
  bool found = false;

  // Paths are visited in lexicographic order. The first pass records every
  // score; the second stops at the first path within tie_eps of the maximum.
  std::function<void(std::size_t, double, bool)> walk = [&](std::size_t s, double score,
                                                            bool second) {
    if (found) return;
    if (s == rows) {
      if (second) {
        if (score >= out.best - tie_eps) {
          out.path = path;
          found = true;
        }
        return;
      }
      for (std::size_t k = 0; k < rows; ++k) {
        double& c = out.constrained[k * cols + path[k]];
        c = std::max(c, score);
      }
      out.best = std::max(out.best, score);
      return;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      path[s] = j;
      const double step = s == 0 ? lg(1.0 / static_cast<double>(cols))
                                 : lg(transition(path[s - 1], j, cols, p_forward, model));
      walk(s + 1, score + step + lg(emissions[s * cols + j]), second);
    }
  };
  walk(0, 0.0, false);
  walk(0, 0.0, true);
  return out;
}

std::size_t subsequence_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t n = a.size();
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<const std::string*> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) sub.push_back(&a[i]);
    }
    if (sub.size() <= best) continue;
    std::size_t k = 0;
    for (const auto& tok : b) {
      if (k < sub.size() && *sub[k] == tok) ++k;
    }
    if (k == sub.size()) best = sub.size();
  }
  return best;
}

double rouge_l_oracle(const std::vector<std::string>& candidate,
                      const std::vector<std::string>& reference) {
  const std::size_t lcs = subsequence_lcs(candidate, reference);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

std::size_t max_matching_oracle(const std::vector<Millis>& predicted,
                                const std::vector<Millis>& truth, Millis tolerance) {
  std::vector<bool> used(truth.size(), false);
  std::function<std::size_t(std::size_t)> best = [&](std::size_t i) -> std::size_t {
    if (i == predicted.size()) return 0;
    std::size_t result = best(i + 1);  // leave predicted[i] unmatched
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (used[j]) continue;
      const auto d = predicted[i] > truth[j] ? predicted[i] - truth[j] : truth[j] - predicted[i];
      if (d > tolerance) continue;
      used[j] = true;
      result = std::max(result, 1 + best(i + 1));
      used[j] = false;
    }
    return result;
  };
  return best(0);
}

double ncc_oracle(const RgbImage& a, const RgbImage& b) {
  const std::size_t n = a.pixel_count();
  std::vector<double> ya(n), yb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto* p = &a.pixels[i * 3];
    const auto* q = &b.pixels[i * 3];
    ya[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    yb[i] = 0.299 * q[0] + 0.587 * q[1] + 0.114 * q[2];
  }
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ya[i];
    mb += yb[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ya[i] - ma) * (yb[i] - mb);
    da += (ya[i] - ma) * (ya[i] - ma);
    db += (yb[i] - mb) * (yb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

}  // namespace papeo::testing
