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

#include "papeo/errors.hpp"
#include "papeo/interactions.hpp"

using namespace papeo;
using namespace papeo::evaluation;

namespace {

ActionEvent ev(long t, std::string kind, std::string dir = "", std::string actor = "u1") {
  ActionEvent e;
  e.timestamp = Millis{t};
  e.actor = std::move(actor);
  e.kind = std::move(kind);
  e.direction = std::move(dir);
  return e;
}

}  // namespace

TEST_CASE("format of an event") {
  CHECK(format_of(ev(0, "scroll")) == Format::paper);
  CHECK(format_of(ev(0, "passage-click")) == Format::paper);
  CHECK(format_of(ev(0, "scrub")) == Format::video);
  CHECK(format_of(ev(0, "note-activate")) == Format::video);
  CHECK(format_of(ev(0, "login")) == Format::unknown);
  auto e = ev(0, "switch-target");
  e.target = Format::video;
  CHECK(format_of(e) == Format::video);
}

TEST_CASE("event json round-trip") {
  auto e = ev(1500, "scroll", "down");
  e.target = Format::paper;
  e.payload = Json{{"passage", "p3"}};
  CHECK(event_from_json(to_json(e)) == e);
  CHECK_THROWS_AS((void)event_from_json(Json{{"kind", "x"}}), SchemaError);
  CHECK_THROWS_AS((void)event_from_json(Json{{"timestamp_ms", 1}, {"kind", "x"}, {"target", "tv"}}),
                  SchemaError);
}

TEST_CASE("events from an array or json lines") {
  const auto a = parse_events(R"([{"timestamp_ms": 1, "kind": "play"}, {"timestamp_ms": 2, "kind": "pause"}])");
  const auto b = parse_events("{\"timestamp_ms\": 1, \"kind\": \"play\"}\n\n"
                              "{\"timestamp_ms\": 2, \"kind\": \"pause\"}\n");
  CHECK(a.size() == 2);
  CHECK(a == b);
  CHECK_THROWS_AS((void)parse_events("{\"timestamp_ms\": 1}\n"), SchemaError);
}

TEST_CASE("sorted check") {
  CHECK_NOTHROW(check_sorted({ev(1, "play"), ev(1, "pause"), ev(5, "play")}));
  CHECK_THROWS_AS(check_sorted({ev(5, "play"), ev(1, "pause")}), InputError);
}

TEST_CASE("consecutive scrolls merge") {
  const std::vector<ActionEvent> events{
      ev(0, "scroll", "down"),    ev(400, "scroll", "down"), ev(1300, "scroll", "down"),
      ev(2400, "scroll", "down"),  // gap 1100: new action
      ev(2600, "scroll", "up"),    // direction change: new action
      ev(9000, "scrub", "forward"), ev(9500, "scrub", "forward"),
  };
  const auto c = count_interactions(events);
  CHECK(c.scrolls == 3);
  CHECK(c.scrubs == 1);
  CHECK(c.switches == 1);
}

TEST_CASE("switches are counted per actor") {
  const std::vector<ActionEvent> events{
      ev(0, "scroll", "down", "a"), ev(10, "play", "", "b"),  ev(20, "play", "", "a"),
      ev(30, "scroll", "up", "b"),  ev(40, "login", "", "a"), ev(50, "scroll", "up", "a"),
  };
  CHECK(count_interactions(events).switches == 3);
}

TEST_CASE("sessions split at idle gaps and drop tiny ones") {
  const long min = 60 * 1000;
  const std::vector<ActionEvent> events{
      ev(0, "play"),          ev(2 * min, "pause"),     ev(5 * min, "scroll", "down"),
      ev(40 * min, "play"),   // 35 min idle: new session of one action, dropped
      ev(100 * min, "play"),  ev(101 * min, "pause"),
      ev(0, "play", "", "v"),
  };
  const auto s = session_stats(events);
  CHECK(s.sessions.size() == 2);
  CHECK(s.dropped == 2);
  CHECK(s.actions_per_session == doctest::Approx(2.5));
  CHECK(s.session_minutes == doctest::Approx(3.0));

  const auto none = session_stats({});
  CHECK(none.sessions.empty());
  CHECK(none.actions_per_session == 0);
}
