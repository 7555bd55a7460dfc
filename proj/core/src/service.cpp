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

#include "papeo/service.hpp"

#include <httplib.h>

#include <algorithm>

#include "papeo/errors.hpp"
#include "papeo/ingest.hpp"
#include "papeo/interactions.hpp"
#include "papeo/json_io.hpp"

namespace papeo::service {

Service::Service(store::Store& store, ServiceConfig config,
                 std::shared_ptr<const linking::EmbeddingProvider> provider)
    : store_(store), config_(std::move(config)), provider_(std::move(provider)) {
  linking::check(config_.linker);
}

SegmentProposals Service::suggest_segments(const std::string& id) const {
  const auto stored = store_.get(id);
  SegmentProposals out;
  out.revision = stored.revision;
  const auto& lines = stored.doc.transcript;
  for (auto& group : ingest::group_sentences(lines, config_.punctuation_set)) {
    SegmentProposal p;
    p.start = lines[group.line_indices.front()].start;
    p.end = lines[group.line_indices.back()].end;
    for (auto li : group.line_indices) p.end = std::max(p.end, lines[li].end);
    p.line_indices = std::move(group.line_indices);
    p.text = std::move(group.text);
    out.proposals.push_back(std::move(p));
  }
  return out;
}

LinkSuggestions Service::suggest_links(const std::string& id, const std::string& segment_id,
                                       std::optional<std::size_t> k) const {
  const auto stored = store_.get(id);
  linking::LinkerConfig cfg = config_.linker;
  if (k) cfg.top_k = *k;
  cfg.rouge_only_fallback = true;
  auto result = linking::suggest(stored.doc, segment_id, cfg, provider_.get());
  return {stored.revision, segment_id, result.degraded, std::move(result.suggestions)};
}

namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(Response& res, int status, const std::string& kind, const std::string& message,
                Json extra = Json::object()) {
  Json body = {{"error", message}, {"kind", kind}};
  for (auto& [k, v] : extra.items()) body[k] = v;
  send_json(res, body, status);
}

void send_doc(Response& res, const store::StoredDoc& stored, int status = 200) {
  res.set_header("ETag", "\"" + std::to_string(stored.revision) + "\"");
  send_json(res, {{"id", stored.id}, {"revision", stored.revision}, {"papeo", to_json(stored.doc)}},
            status);
}

class PreconditionRequired : public Error {
 public:
  using Error::Error;
};

long long if_match(const Request& req) {
  if (!req.has_header("If-Match")) {
    throw PreconditionRequired("mutations require an If-Match revision header");
  }
  std::string v = req.get_header_value("If-Match");
  std::erase(v, '"');
  if (v.starts_with("W/")) v.erase(0, 2);
  try {
    std::size_t used = 0;
    long long rev = std::stoll(v, &used);
    if (used != v.size()) throw InputError("bad If-Match value");
    return rev;
  } catch (const std::logic_error&) {
    throw InputError("If-Match must carry a numeric revision");
  }
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const Request& req, Response& res) {
    try {
      f(req, res);
    } catch (const NotFound& e) {
      send_error(res, 404, "not-found", e.what());
    } catch (const Conflict& e) {
      res.set_header("ETag", "\"" + std::to_string(e.actual()) + "\"");
      send_error(res, 409, "conflict", e.what(), {{"revision", e.actual()}});
    } catch (const Invalid& e) {
      send_error(res, 422, "invalid", e.what(), {{"violations", to_json(e.violations())}});
    } catch (const PreconditionRequired& e) {
      send_error(res, 428, "precondition-required", e.what());
    } catch (const EmbedError& e) {
      send_error(res, 502, "embed-error", e.what());
    } catch (const ParseError& e) {
      send_error(res, 400, "parse-error", e.what());
    } catch (const VersionError& e) {
      send_error(res, 400, "version-error", e.what());
    } catch (const SchemaError& e) {
      send_error(res, 400, "schema-error", e.what(), {{"path", e.path()}});
    } catch (const InputError& e) {
      send_error(res, 400, "bad-request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

std::vector<TranscriptLine> transcript_from_request(const Json& j) {
  if (j.is_array()) {
    std::vector<TranscriptLine> lines;
    for (std::size_t i = 0; i < j.size(); ++i) {
      lines.push_back(transcript_line_from_json(j[i], "/transcript/" + std::to_string(i)));
    }
    return lines;
  }
  if (j.is_object() && j.contains("content") && j["content"].is_string()) {
    const std::string format = j.value("format", std::string("vtt"));
    auto f = format == "srt" ? ingest::TranscriptFormat::srt : ingest::TranscriptFormat::vtt;
    if (format != "srt" && format != "vtt") {
      throw SchemaError("/transcript/format", "expected \"srt\" or \"vtt\"");
    }
    return ingest::parse_transcript(j["content"].get<std::string>(), f).lines;
  }
  throw SchemaError("/transcript", "expected a line array or {format, content}");
}

}  // namespace

void Service::register_routes(httplib::Server& server) {
  const std::string id_re = "([A-Za-z0-9_-]+)";
  const std::string sub_re = "([^/]+)";

  server.Post("/papeos", guarded([this](const Request& req, Response& res) {
    Json body = parse_json(req.body);
    if (!body.is_object() || !body.contains("layout")) {
      throw SchemaError("/layout", "missing required field");
    }
    PaperDocument paper = ingest::parse_layout(body["layout"].dump());
    std::vector<TranscriptLine> transcript;
    if (body.contains("transcript")) transcript = transcript_from_request(body["transcript"]);
    VideoMeta video;
    if (body.contains("video")) {
      const Json& v = body["video"];
      if (!v.is_object()) throw SchemaError("/video", "expected object");
      video.uri = v.value("uri", std::string());
      if (v.contains("frame_rate") && v["frame_rate"].is_number()) {
        video.frame_rate = v["frame_rate"].get<double>();
      }
      if (v.contains("duration_ms")) video = video_from_json(v, "/video");
    }
    if (video.duration.count() == 0) {
      for (const auto& l : transcript) video.duration = std::max(video.duration, l.end);
    }
    send_doc(res, store_.create_papeo(std::move(paper), std::move(transcript), std::move(video)),
             201);
  }));

  server.Get("/papeos", guarded([this](const Request&, Response& res) {
    Json arr = Json::array();
    for (const auto& s : store_.list()) {
      arr.push_back({{"id", s.id}, {"revision", s.revision}, {"title", s.title}});
    }
    send_json(res, {{"papeos", arr}});
  }));

  server.Get("/papeos/" + id_re, guarded([this](const Request& req, Response& res) {
    send_doc(res, store_.get(req.matches[1]));
  }));

  server.Delete("/papeos/" + id_re, guarded([this](const Request& req, Response& res) {
    store_.remove(req.matches[1]);
    res.status = 204;
  }));

  server.Put("/papeos/" + id_re + "/segments/" + sub_re,
             guarded([this](const Request& req, Response& res) {
               Json body = parse_json(req.body);
               if (!body.is_object()) throw SchemaError("/", "expected object");
               body["id"] = req.matches[2].str();
               send_doc(res, store_.upsert_segment(req.matches[1], if_match(req),
                                                   segment_from_json(body)));
             }));

  server.Delete("/papeos/" + id_re + "/segments/" + sub_re,
                guarded([this](const Request& req, Response& res) {
                  send_doc(res, store_.delete_segment(req.matches[1], if_match(req),
                                                      req.matches[2]));
                }));

  server.Put("/papeos/" + id_re + "/links/" + sub_re,
             guarded([this](const Request& req, Response& res) {
               Json body = parse_json(req.body);
               if (!body.is_object()) throw SchemaError("/", "expected object");
               body["segment_id"] = req.matches[2].str();
               send_doc(res, store_.set_link(req.matches[1], if_match(req), link_from_json(body)));
             }));

  server.Delete("/papeos/" + id_re + "/links/" + sub_re,
                guarded([this](const Request& req, Response& res) {
                  send_doc(res, store_.clear_link(req.matches[1], if_match(req), req.matches[2]));
                }));

  server.Post("/papeos/" + id_re + "/sync-highlights",
              guarded([this](const Request& req, Response& res) {
                Json body = parse_json(req.body);
                if (body.is_object() && !body.contains("id")) body["id"] = "";
                send_doc(res, store_.add_sync_highlight(req.matches[1], if_match(req),
                                                        sync_highlight_from_json(body)),
                         201);
              }));

  server.Delete("/papeos/" + id_re + "/sync-highlights/" + sub_re,
                guarded([this](const Request& req, Response& res) {
                  send_doc(res, store_.remove_sync_highlight(req.matches[1], if_match(req),
                                                             req.matches[2]));
                }));

  server.Get("/papeos/" + id_re + "/suggest/segments",
             guarded([this](const Request& req, Response& res) {
               auto out = suggest_segments(req.matches[1]);
               Json arr = Json::array();
               for (const auto& p : out.proposals) {
                 arr.push_back({{"line_indices", p.line_indices},
                                {"start_ms", p.start.count()},
                                {"end_ms", p.end.count()},
                                {"text", p.text}});
               }
               send_json(res, {{"revision", out.revision}, {"proposals", arr}});
             }));

  server.Get("/papeos/" + id_re + "/suggest/links/" + sub_re,
             guarded([this](const Request& req, Response& res) {
               std::optional<std::size_t> k;
               if (req.has_param("k")) {
                 try {
                   long long v = std::stoll(req.get_param_value("k"));
                   if (v < 1) throw InputError("k must be >= 1");
                   k = static_cast<std::size_t>(v);
                 } catch (const std::logic_error&) {
                   throw InputError("k must be a positive integer");
                 }
               }
               auto out = suggest_links(req.matches[1], req.matches[2], k);
               Json arr = Json::array();
               for (const auto& s : out.suggestions) {
                 arr.push_back({{"passage_id", s.passage_id}, {"score", s.score}});
               }
               send_json(res, {{"revision", out.revision},
                               {"segment_id", out.segment_id},
                               {"degraded", out.degraded},
                               {"suggestions", arr}});
             }));

  server.Post("/papeos/" + id_re + "/events", guarded([this](const Request& req, Response& res) {
    Json body = parse_json(req.body);
    const Json& arr = body.is_object() && body.contains("events") ? body["events"] : body;
    if (!arr.is_array()) throw SchemaError("/events", "expected array");
    std::vector<evaluation::ActionEvent> events;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      events.push_back(evaluation::event_from_json(arr[i], "/events/" + std::to_string(i)));
    }
    send_json(res, {{"accepted", store_.append_events(req.matches[1], events)}});
  }));

  server.Get("/papeos/" + id_re + "/events", guarded([this](const Request& req, Response& res) {
    Json arr = Json::array();
    for (const auto& e : store_.read_events(req.matches[1])) arr.push_back(evaluation::to_json(e));
    send_json(res, {{"events", arr}});
  }));

  server.Get("/papeos/" + id_re + "/stats", guarded([this](const Request& req, Response& res) {
    const auto stored = store_.get(req.matches[1]);
    Json body = to_json(papeo_stats(stored.doc));
    const auto events = store_.read_events(req.matches[1]);
    const auto counts = evaluation::count_interactions(events);
    const auto sessions = evaluation::session_stats(events);
    body["interactions"] = {{"switches", counts.switches},
                            {"scrolls", counts.scrolls},
                            {"scrubs", counts.scrubs}};
    body["sessions"] = {{"count", sessions.sessions.size()},
                        {"actions_per_session", sessions.actions_per_session},
                        {"session_minutes", sessions.session_minutes}};
    send_json(res, body);
  }));

  if (config_.media_dir) server.set_mount_point("/media", config_.media_dir->string());
  if (config_.static_dir) server.set_mount_point("/", config_.static_dir->string());
}

}  // namespace papeo::service
