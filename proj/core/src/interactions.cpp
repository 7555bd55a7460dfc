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

#include "papeo/interactions.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "papeo/errors.hpp"

namespace papeo::evaluation {
namespace {

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::string_view to_string(Format f) {
  switch (f) {
    case Format::paper: return "paper";
    case Format::video: return "video";
    case Format::unknown: break;
  }
  return "";
}

// Events grouped by actor, each group in input order.
std::map<std::string, std::vector<const ActionEvent*>> by_actor(
    const std::vector<ActionEvent>& events) {
  std::map<std::string, std::vector<const ActionEvent*>> out;
  for (const auto& e : events) out[e.actor].push_back(&e);
  return out;
}

}  // namespace

Format format_of(const ActionEvent& e) {
  if (e.target != Format::unknown) return e.target;
  const std::string_view k = e.kind;
  if (k == "scroll" || k == "zoom" || starts_with(k, "passage-") || k == "highlight-hover") {
    return Format::paper;
  }
  if (k == "scrub" || k == "play" || k == "pause" || k == "seek" || starts_with(k, "note-")) {
    return Format::video;
  }
  return Format::unknown;
}

Json to_json(const ActionEvent& e) {
  Json j;
  j["timestamp_ms"] = e.timestamp.count();
  j["actor"] = e.actor;
  j["kind"] = e.kind;
  if (!e.direction.empty()) j["direction"] = e.direction;
  if (e.target != Format::unknown) j["target"] = std::string(to_string(e.target));
  if (!e.payload.is_null()) j["payload"] = e.payload;
  return j;
}

ActionEvent event_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected object");
  ActionEvent e;
  if (!j.contains("timestamp_ms") || !j["timestamp_ms"].is_number_integer()) {
    throw SchemaError(path + "/timestamp_ms", "expected integer");
  }
  e.timestamp = Millis{j["timestamp_ms"].get<std::int64_t>()};
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw SchemaError(path + "/kind", "expected string");
  }
  e.kind = j["kind"].get<std::string>();
  if (j.contains("actor")) {
    if (!j["actor"].is_string()) throw SchemaError(path + "/actor", "expected string");
    e.actor = j["actor"].get<std::string>();
  }
  if (j.contains("direction")) {
    if (!j["direction"].is_string()) throw SchemaError(path + "/direction", "expected string");
    e.direction = j["direction"].get<std::string>();
  }
  if (j.contains("target")) {
    const auto t = j["target"].is_string() ? j["target"].get<std::string>() : std::string();
    if (t == "paper") e.target = Format::paper;
    else if (t == "video") e.target = Format::video;
    else throw SchemaError(path + "/target", "expected \"paper\" or \"video\"");
  }
  if (j.contains("payload")) e.payload = j["payload"];
  return e;
}

std::vector<ActionEvent> parse_events(std::string_view bytes) {
  std::vector<ActionEvent> events;
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && bytes[first] == '[') {
    Json arr = parse_json(bytes);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      events.push_back(event_from_json(arr[i], "/" + std::to_string(i)));
    }
    return events;
  }
  std::size_t pos = 0, line = 0;
  while (pos < bytes.size()) {
    auto nl = bytes.find('\n', pos);
    auto text = bytes.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) {
      ++line;
      continue;
    }
    events.push_back(event_from_json(parse_json(text), "/" + std::to_string(line++)));
  }
  return events;
}

void check_sorted(const std::vector<ActionEvent>& events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].timestamp < events[i - 1].timestamp) {
      throw InputError("event " + std::to_string(i) + " is earlier than its predecessor");
    }
  }
}

InteractionCounts count_interactions(const std::vector<ActionEvent>& events,
                                     Millis merge_window) {
  InteractionCounts counts;
  for (const auto& [actor, stream] : by_actor(events)) {
    Format last_format = Format::unknown;
    const ActionEvent* last_scroll = nullptr;
    const ActionEvent* last_scrub = nullptr;
    for (const ActionEvent* e : stream) {
      const Format f = format_of(*e);
      if (f != Format::unknown) {
        if (last_format != Format::unknown && f != last_format) ++counts.switches;
        last_format = f;
      }
      auto collapse = [&](const ActionEvent*& last, std::size_t& counter) {
        const bool merged = last && last->direction == e->direction &&
                            e->timestamp - last->timestamp <= merge_window;
        if (!merged) ++counter;
        last = e;
      };
      if (e->kind == "scroll") collapse(last_scroll, counts.scrolls);
      if (e->kind == "scrub") collapse(last_scrub, counts.scrubs);
    }
  }
  return counts;
}

SessionStats session_stats(const std::vector<ActionEvent>& events, Millis idle,
                           std::size_t min_actions) {
  SessionStats stats;
  for (auto& [actor, stream] : by_actor(events)) {
    std::stable_sort(stream.begin(), stream.end(),
                     [](const ActionEvent* a, const ActionEvent* b) {
                       return a->timestamp < b->timestamp;
                     });
    Session current;
    bool open = false;
    auto close = [&] {
      if (!open) return;
      if (current.actions >= min_actions) {
        stats.sessions.push_back(current);
      } else {
        ++stats.dropped;
      }
      open = false;
    };
    for (const ActionEvent* e : stream) {
      if (open && e->timestamp - current.end >= idle) close();
      if (!open) {
        current = Session{actor, e->timestamp, e->timestamp, 0};
        open = true;
      }
      current.end = e->timestamp;
      ++current.actions;
    }
    close();
  }
  if (!stats.sessions.empty()) {
    double actions = 0, minutes = 0;
    for (const auto& s : stats.sessions) {
      actions += static_cast<double>(s.actions);
      minutes += static_cast<double>((s.end - s.start).count()) / 60000.0;
    }
    const double n = static_cast<double>(stats.sessions.size());
    stats.actions_per_session = actions / n;
    stats.session_minutes = minutes / n;
  }
  return stats;
}

}  // namespace papeo::evaluation
