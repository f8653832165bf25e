#include "pacmap/serialize.hpp"

#include <charconv>
#include <map>

#include "pacmap/error.hpp"

namespace pacmap {
namespace {

using json = nlohmann::json;

class LineWriter {
 public:
  LineWriter() { out_.reserve(192); out_ += '{'; }

  LineWriter& raw(std::string_view key, std::string_view value) {
    if (out_.size() > 1) out_ += ',';
    out_ += '"';
    out_ += key;
    out_ += "\":";
    out_ += value;
    return *this;
  }
  LineWriter& str(std::string_view key, std::string_view value) {
    return raw(key, "\"" + std::string(value) + "\"");
  }
  LineWriter& num(std::string_view key, std::int64_t value) { return raw(key, std::to_string(value)); }
  LineWriter& real(std::string_view key, double value, int decimals) { return raw(key, fixed(value, decimals)); }
  LineWriter& boolean(std::string_view key, bool value) { return raw(key, value ? "true" : "false"); }

  std::string finish() {
    out_ += '}';
    return std::move(out_);
  }

 private:
  std::string out_;
};

json point_json(GeoPoint p) { return json::array({p.lat, p.lon}); }

GeoPoint point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, "expected [lat, lon]");
  return geo::make_point(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

std::string fixed(double value, int decimals) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  if (ec != std::errc()) return "null";
  std::string s(buf, ptr);
  if (!s.empty() && s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string to_json_line(const GameEvent& e) {
  LineWriter w;
  w.num("v", kProtocolVersion).str("type", "event").num("seq", static_cast<std::int64_t>(e.seq));
  w.real("t", e.time, 3).str("kind", to_string(e.kind));
  switch (e.kind) {
    case EventKind::FixApplied:
      w.real("lat", e.position.lat, 7).real("lon", e.position.lon, 7);
      w.num("edge", e.edge).real("offset", e.offset, 3).num("heading", e.node);
      break;
    case EventKind::FixRejected:
      w.real("lat", e.position.lat, 7).real("lon", e.position.lon, 7);
      w.real("distance", e.distance, 3).str("reason", "outside_space");
      break;
    case EventKind::CookieCollected:
      w.num("cookie", e.subject).num("score", e.score);
      break;
    case EventKind::LifeGained:
      w.num("poi", e.subject).num("lives", e.lives).boolean("capped", e.capped);
      break;
    case EventKind::TrapEntered:
      w.num("poi", e.subject).real("until", e.until, 3);
      break;
    case EventKind::TrapExpired:
      break;
    case EventKind::Replanned: {
      w.num("ghost", e.ghost).str("reason", to_string(e.reason)).num("goal", e.node);
      w.real("length", e.distance, 3);
      std::string nodes = "[";
      for (std::size_t i = 0; i < e.path.size(); ++i) {
        if (i) nodes += ',';
        nodes += std::to_string(e.path[i]);
      }
      w.raw("path", nodes + "]");
      break;
    }
    case EventKind::Caught:
      w.num("ghost", e.ghost).str("cause", to_string(e.cause)).real("distance", e.distance, 3);
      break;
    case EventKind::LifeLost:
      w.num("lives", e.lives);
      break;
    case EventKind::Won:
    case EventKind::Lost:
      w.num("score", e.score).num("lives", e.lives);
      break;
  }
  return w.finish();
}

std::string to_json_lines(const std::vector<GameEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += to_json_line(e);
    out += '\n';
  }
  return out;
}

json stage_to_json(const GameSpace& space) {
  json nodes = json::array();
  for (NodeId id : space.graph.node_ids()) {
    const GeoPoint p = space.graph.position(id);
    nodes.push_back({{"id", id}, {"lat", p.lat}, {"lon", p.lon}});
  }
  json edges = json::array();
  for (const Edge& e : space.graph.edges()) {
    json geometry = json::array();
    for (const GeoPoint& p : e.geometry) geometry.push_back(point_json(p));
    edges.push_back({{"id", e.id}, {"a", e.a}, {"b", e.b}, {"length", e.length}, {"geometry", geometry}});
  }
  json cookies = json::array();
  for (const Cookie& c : space.cookies) {
    cookies.push_back({{"id", c.id},
                       {"edge", c.edge},
                       {"offset", c.offset},
                       {"lat", c.position.lat},
                       {"lon", c.position.lon},
                       {"collected", c.collected}});
  }
  json pois = json::array();
  for (const Poi& p : space.pois) {
    pois.push_back({{"id", p.id},
                    {"category", osm::to_string(p.category)},
                    {"lat", p.position.lat},
                    {"lon", p.position.lon},
                    {"consumed", p.consumed}});
  }
  return {{"v", kProtocolVersion},
          {"center", {{"lat", space.center.lat}, {"lon", space.center.lon}}},
          {"config",
           {{"radius", space.config.radius},
            {"cookie_spacing", space.config.cookie_spacing},
            {"min_edge_cookie_margin", space.config.min_edge_cookie_margin}}},
          {"nodes", nodes},
          {"edges", edges},
          {"cookies", cookies},
          {"pois", pois}};
}

GameSpace stage_from_json(const json& doc) {
  try {
    if (doc.at("v").get<int>() != kProtocolVersion) {
      throw Error(ErrorCode::InvalidInput, "unsupported stage version");
    }
    GameSpace space;
    space.center = geo::make_point(doc.at("center").at("lat").get<double>(), doc.at("center").at("lon").get<double>());
    const json& cfg = doc.at("config");
    space.config.radius = cfg.at("radius").get<double>();
    space.config.cookie_spacing = cfg.at("cookie_spacing").get<double>();
    space.config.min_edge_cookie_margin = cfg.at("min_edge_cookie_margin").get<double>();
    space.config.validate();

    std::map<NodeId, GeoPoint> nodes;
    for (const json& n : doc.at("nodes")) {
      nodes.emplace(n.at("id").get<NodeId>(), geo::make_point(n.at("lat").get<double>(), n.at("lon").get<double>()));
    }
    std::vector<EdgeDraft> drafts;
    for (const json& e : doc.at("edges")) {
      if (e.at("id").get<EdgeId>() != drafts.size()) {
        throw Error(ErrorCode::InvalidInput, "stage edges must be listed in dense id order");
      }
      EdgeDraft d{e.at("a").get<NodeId>(), e.at("b").get<NodeId>(), {}};
      for (const json& p : e.at("geometry")) d.geometry.push_back(point_from(p));
      drafts.push_back(std::move(d));
    }
    space.graph = RoadGraph(nodes, std::move(drafts));

    for (const json& c : doc.at("cookies")) {
      Cookie cookie;
      cookie.id = c.at("id").get<CookieId>();
      cookie.edge = c.at("edge").get<EdgeId>();
      cookie.offset = c.at("offset").get<double>();
      cookie.position = geo::make_point(c.at("lat").get<double>(), c.at("lon").get<double>());
      cookie.collected = c.value("collected", false);
      if (cookie.edge >= space.graph.edge_count()) throw Error(ErrorCode::InvalidInput, "cookie on unknown edge");
      space.cookies.push_back(cookie);
    }
    for (const json& p : doc.at("pois")) {
      Poi poi;
      poi.id = p.at("id").get<NodeId>();
      const auto category = p.at("category").get<std::string>();
      if (category == "LifeBoost") {
        poi.category = PoiCategory::LifeBoost;
      } else if (category == "VisibilityTrap") {
        poi.category = PoiCategory::VisibilityTrap;
      } else {
        throw Error(ErrorCode::InvalidInput, "unknown POI category " + category);
      }
      poi.position = geo::make_point(p.at("lat").get<double>(), p.at("lon").get<double>());
      poi.consumed = p.value("consumed", false);
      space.pois.push_back(poi);
    }
    if (space.cookies.empty()) throw Error(ErrorCode::InvalidInput, "stage has no cookies");
    return space;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed stage JSON: ") + e.what());
  }
}

json snapshot_to_json(const SessionState& state) {
  const PlayerState& p = state.player;
  json ghosts = json::array();
  for (const Ghost& g : state.ghosts) {
    json ghost = {{"id", g.id},
                  {"kind", to_string(g.kind)},
                  {"color", to_string(g.color)},
                  {"lat", g.position.lat},
                  {"lon", g.position.lon}};
    ghost["goal"] = g.route ? json(g.route->goal()) : json(nullptr);
    ghosts.push_back(ghost);
  }
  json cookies = json::array();
  for (const Cookie& c : state.space.cookies) {
    if (!c.collected) cookies.push_back({{"id", c.id}, {"lat", c.position.lat}, {"lon", c.position.lon}});
  }
  json pois = json::array();
  for (const Poi& poi : state.space.pois) {
    if (poi.consumed) continue;
    pois.push_back({{"id", poi.id},
                    {"category", osm::to_string(poi.category)},
                    {"lat", poi.position.lat},
                    {"lon", poi.position.lon}});
  }
  json edges = json::array();
  for (const Edge& e : state.space.graph.edges()) {
    json line = json::array();
    for (const GeoPoint& pt : e.geometry) line.push_back(point_json(pt));
    edges.push_back(line);
  }
  const bool trapped = p.trapped_until.has_value();
  return {{"clock", state.clock},
          {"tick", state.tick_count},
          {"phase", to_string(state.phase)},
          {"lives", p.lives},
          {"score", p.score},
          {"player",
           {{"lat", p.position.lat},
            {"lon", p.position.lon},
            {"edge", p.match.edge},
            {"offset", p.match.offset},
            {"heading", p.heading_node}}},
          {"effects",
           {{"trapped", trapped},
            {"trapped_until", trapped ? json(*p.trapped_until) : json(nullptr)},
            {"invulnerable_until", state.invulnerable_until}}},
          {"ghosts", ghosts},
          {"cookies", cookies},
          {"pois", pois},
          {"center", {{"lat", state.space.center.lat}, {"lon", state.space.center.lon}}},
          {"radius", state.space.config.radius},
          {"edges", edges}};
}

}  // namespace pacmap
