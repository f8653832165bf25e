#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pacmap/error.hpp"
#include "pacmap/serialize.hpp"
#include "pacmap/sim.hpp"
#include "support.hpp"

using namespace pacmap;

TEST_CASE("fixed-point formatting") {
  CHECK(fixed(1.5, 3) == "1.500");
  CHECK(fixed(-0.0, 3) == "0.000");
  CHECK(fixed(-0.0004, 3) == "0.000");
  CHECK(fixed(-1.25, 1) == "-1.2");  // round-half-even on the exact binary value
  CHECK(fixed(39.10401234567, 7) == "39.1040123");
  CHECK(fixed(1e6, 0) == "1000000");
}

TEST_CASE("event lines have a fixed layout") {
  GameEvent e;
  e.seq = 4;
  e.time = 7.0;
  e.kind = EventKind::Replanned;
  e.ghost = 0;
  e.reason = ReplanReason::EdgeChange;
  e.node = 102;
  e.distance = 160.0979;
  e.path = {110, 103, 102};
  CHECK(to_json_line(e) ==
        R"({"v":1,"type":"event","seq":4,"t":7.000,"kind":"Replanned","ghost":0,"reason":"EdgeChange","goal":102,"length":160.098,"path":[110,103,102]})");

  GameEvent fix;
  fix.kind = EventKind::FixApplied;
  fix.time = 1.0;
  fix.position = {39.10401274, 26.55602969};
  fix.edge = 10;
  fix.offset = 8.6041;
  fix.node = 105;
  CHECK(to_json_line(fix) ==
        R"({"v":1,"type":"event","seq":0,"t":1.000,"kind":"FixApplied","lat":39.1040127,"lon":26.5560297,"edge":10,"offset":8.604,"heading":105})");

  GameEvent caught;
  caught.kind = EventKind::Caught;
  caught.time = 12.4;
  caught.ghost = 2;
  caught.cause = CatchCause::EdgeTraversal;
  caught.distance = 3.14159;
  CHECK(to_json_line(caught) ==
        R"({"v":1,"type":"event","seq":0,"t":12.400,"kind":"Caught","ghost":2,"cause":"edge_traversal","distance":3.142})");
}

TEST_CASE("every event line is valid JSON") {
  const auto trace = sim::load_trace(testing::source_path("fixtures/traces/T1.jsonl"));
  const auto events = sim::run_trace(testing::campus_space(), {}, trace, 30.0);
  for (const auto& e : events) {
    const auto j = nlohmann::json::parse(to_json_line(e));
    CHECK(j.at("v") == kProtocolVersion);
    CHECK(j.at("type") == "event");
    CHECK(j.at("seq") == e.seq);
    CHECK(j.at("kind") == std::string(to_string(e.kind)));
  }
}

TEST_CASE("stage JSON round-trips exactly") {
  const GameSpace& space = testing::campus_space();
  const auto doc = stage_to_json(space);
  const GameSpace back = stage_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.center == space.center);
  REQUIRE(back.graph.edge_count() == space.graph.edge_count());
  for (std::size_t i = 0; i < space.graph.edge_count(); ++i) {
    CHECK(back.graph.edges()[i].length == space.graph.edges()[i].length);
    CHECK(back.graph.edges()[i].geometry == space.graph.edges()[i].geometry);
  }
  REQUIRE(back.cookies.size() == space.cookies.size());
  for (std::size_t i = 0; i < space.cookies.size(); ++i) {
    CHECK(back.cookies[i].position == space.cookies[i].position);
    CHECK(back.cookies[i].offset == space.cookies[i].offset);
  }
  CHECK(back.pois.size() == space.pois.size());
  CHECK(stage_to_json(back) == doc);
  // A replay on the reloaded stage matches one on the original.
  const auto trace = sim::load_trace(testing::source_path("fixtures/traces/T1.jsonl"));
  CHECK(to_json_lines(sim::run_trace(back, {}, trace)) == to_json_lines(sim::run_trace(space, {}, trace)));
}

TEST_CASE("malformed stage JSON is rejected") {
  auto doc = stage_to_json(testing::campus_space());
  doc.erase("nodes");
  CHECK_THROWS_AS(stage_from_json(doc), Error);
  doc = stage_to_json(testing::campus_space());
  doc["v"] = 99;
  CHECK_THROWS_AS(stage_from_json(doc), Error);
  doc = stage_to_json(testing::campus_space());
  doc["pois"][0]["category"] = "Teleport";
  CHECK_THROWS_AS(stage_from_json(doc), Error);
}

TEST_CASE("snapshot is self-sufficient") {
  SessionState s = create_session(testing::campus_space(), {}, testing::kCampusCenter);
  apply_fix(s, s.space.cookies[0].position, 0.5);
  for (int i = 0; i < 10; ++i) tick(s);
  const auto snap = snapshot_to_json(s);
  CHECK(snap.at("ghosts").size() == 4);
  CHECK(snap.at("cookies").size() == s.cookies_remaining());
  CHECK(snap.at("edges").size() == s.space.graph.edge_count());
  CHECK(snap.at("pois").size() == 2);
  CHECK(snap.at("score") == s.player.score);
  CHECK(snap.at("lives") == s.player.lives);  // cookie 0 sits by a roamer spawn
  CHECK(snap.at("phase") == "Running");
  CHECK(snap.at("radius") == 200.0);
  CHECK(snap.at("clock").get<double>() == doctest::Approx(2.0));
  for (const char* key : {"player", "effects", "center", "tick"}) CHECK(snap.contains(key));
}
