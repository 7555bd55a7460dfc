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

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace papeo::linking {

using Vector = std::vector<double>;

/// Source of text embeddings. Implementations must be safe to call from
/// several threads at once.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;

  /// Returns one vector per text, all of equal length. `corpus` is the full
  /// text collection of the current job (paper passages plus transcript
  /// segments); corpus-statistics providers fit on it, others ignore it.
  /// Throws EmbedError on failure.
  virtual std::vector<Vector> embed(std::span<const std::string> texts,
                                    std::span<const std::string> corpus) const = 0;
};

/// Built-in provider: L2-normalized TF-IDF over linker unigram tokens. Raw
/// term counts; idf = ln((1 + N) / (1 + df)) + 1 fitted on the corpus (on
/// the texts themselves when the corpus is empty). Vocabulary is sorted.
class TfidfProvider final : public EmbeddingProvider {
 public:
  std::string name() const override { return "builtin"; }
  std::vector<Vector> embed(std::span<const std::string> texts,
                            std::span<const std::string> corpus) const override;
};

struct HttpProviderOptions {
  std::string endpoint;  // e.g. "http://127.0.0.1:8000/embed"
  std::string model;
  std::size_t batch_size = 32;
  std::chrono::milliseconds timeout{10000};
};

/// Client for an external embedding service. Request body
/// `{"model": ..., "texts": [...]}`, response `{"embeddings": [[...], ...]}`.
/// Texts are sent in batches of `batch_size`.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpProviderOptions options);
  std::string name() const override { return "http:" + options_.model; }
  std::vector<Vector> embed(std::span<const std::string> texts,
                            std::span<const std::string> corpus) const override;

 private:
  HttpProviderOptions options_;
  std::string scheme_host_port_;
  std::string path_;
};

/// "builtin" or "http" (which needs options.endpoint). InputError otherwise.
std::unique_ptr<EmbeddingProvider> make_provider(const std::string& name,
                                                 const HttpProviderOptions& options = {});

/// Cosine similarity; 0 when either vector is zero.
double cosine(const Vector& a, const Vector& b);

}  // namespace papeo::linking
