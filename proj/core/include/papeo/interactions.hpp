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

#include <string>
#include <string_view>
#include <vector>

#include "papeo/json_io.hpp"
#include "papeo/model.hpp"

namespace papeo::evaluation {

enum class Format { unknown, paper, video };

struct ActionEvent {
  Millis timestamp{0};
  std::string actor;
  std::string kind;       // scroll, scrub, play, pause, switch-target, note-activate, ...
  std::string direction;  // up/down, forward/backward; empty when not directional
  Format target = Format::unknown;  // unknown: derived from kind
  Json payload;
  friend bool operator==(const ActionEvent&, const ActionEvent&) = default;
};

/// The format an event interacts with: the explicit target when set,
/// otherwise scroll/zoom/passage-* act on the paper and scrub/play/pause/
/// seek/note-* on the video.
Format format_of(const ActionEvent& e);

Json to_json(const ActionEvent& e);
ActionEvent event_from_json(const Json& j, const std::string& path = "");

/// Reads a JSON array or JSON-lines stream of events.
std::vector<ActionEvent> parse_events(std::string_view bytes);

/// InputError unless timestamps are non-decreasing.
void check_sorted(const std::vector<ActionEvent>& events);

struct InteractionCounts {
  std::size_t switches = 0;
  std::size_t scrolls = 0;
  std::size_t scrubs = 0;
};

/// Per actor: a switch is an event on one format right after an event on the
/// other; scroll and scrub events of the same direction within one second of
/// the previous event of that kind collapse into one action.
InteractionCounts count_interactions(const std::vector<ActionEvent>& events,
                                     Millis merge_window = Millis{1000});

struct Session {
  std::string actor;
  Millis start{0};
  Millis end{0};
  std::size_t actions = 0;
};

struct SessionStats {
  std::vector<Session> sessions;
  std::size_t dropped = 0;
  double actions_per_session = 0.0;
  double session_minutes = 0.0;
};

/// Sessions are maximal per-actor runs without an idle gap of `idle` or
/// more; sessions with fewer than `min_actions` events are dropped.
SessionStats session_stats(const std::vector<ActionEvent>& events,
                           Millis idle = Millis{30 * 60 * 1000}, std::size_t min_actions = 2);

}  // namespace papeo::evaluation
