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

#include "papeo/embedding.hpp"

#include <httplib.h>

#include <cmath>
#include <map>
#include <unordered_map>

#include "papeo/errors.hpp"
#include "papeo/json_io.hpp"
#include "papeo/text.hpp"

namespace papeo::linking {

std::vector<Vector> TfidfProvider::embed(std::span<const std::string> texts,
                                         std::span<const std::string> corpus) const {
  if (corpus.empty()) corpus = texts;

  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    auto tokens = text::tokenize(doc);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[t];
  }
  // Tokens of the texts that are absent from the corpus still get a column.
  std::vector<std::vector<std::string>> text_tokens;
  for (const auto& t : texts) {
    text_tokens.push_back(text::tokenize(t));
    for (const auto& tok : text_tokens.back()) df.try_emplace(tok, 0);
  }

  const double n = static_cast<double>(corpus.size());
  std::unordered_map<std::string, std::pair<std::size_t, double>> column;
  std::size_t col = 0;
  for (const auto& [tok, count] : df) {
    column.emplace(tok, std::make_pair(col++, std::log((1.0 + n) / (1.0 + count)) + 1.0));
  }

  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& tokens : text_tokens) {
    Vector v(df.size(), 0.0);
    for (const auto& tok : tokens) {
      const auto& [c, idf] = column.at(tok);
      v[c] += idf;
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpProviderOptions options)
    : options_(std::move(options)) {
  const std::string& url = options_.endpoint;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw InputError("embedding endpoint must be an http:// URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (options_.batch_size == 0) options_.batch_size = 1;
}

std::vector<Vector> HttpEmbeddingProvider::embed(std::span<const std::string> texts,
                                                 std::span<const std::string>) const {
  // One client per call keeps concurrent callers independent.
  httplib::Client client(scheme_host_port_);
  const auto secs = options_.timeout.count() / 1000;
  const auto usecs = (options_.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);

  std::vector<Vector> out;
  out.reserve(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += options_.batch_size) {
    const std::size_t end = std::min(texts.size(), begin + options_.batch_size);
    Json body;
    body["model"] = options_.model;
    body["texts"] = Json::array();
    for (std::size_t i = begin; i < end; ++i) body["texts"].push_back(texts[i]);

    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) {
      throw EmbedError("embedding service unreachable: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw EmbedError("embedding service returned HTTP " + std::to_string(res->status));
    }
    Json reply;
    try {
      reply = Json::parse(res->body);
    } catch (const std::exception& e) {
      throw EmbedError(std::string("embedding service sent malformed JSON: ") + e.what());
    }
    if (!reply.contains("embeddings") || !reply["embeddings"].is_array() ||
        reply["embeddings"].size() != end - begin) {
      throw EmbedError("embedding service response has wrong shape");
    }
    for (const auto& row : reply["embeddings"]) {
      if (!row.is_array()) throw EmbedError("embedding row is not an array");
      Vector v;
      v.reserve(row.size());
      for (const auto& x : row) {
        if (!x.is_number()) throw EmbedError("embedding value is not a number");
        v.push_back(x.get<double>());
      }
      if (!out.empty() && v.size() != out.front().size()) {
        throw EmbedError("embedding vectors differ in length");
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(const std::string& name,
                                                 const HttpProviderOptions& options) {
  if (name == "builtin" || name == "tfidf") return std::make_unique<TfidfProvider>();
  if (name == "http") {
    if (options.endpoint.empty()) throw InputError("http embedder needs an endpoint");
    return std::make_unique<HttpEmbeddingProvider>(options);
  }
  throw InputError("unknown embedder '" + name + "'");
}

double cosine(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw EmbedError("vector length mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace papeo::linking
