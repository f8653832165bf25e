#pragma once

#include <cstdint>
#include <vector>

#include "pacmap/osm.hpp"
#include "pacmap/road_graph.hpp"

namespace pacmap {

using osm::Poi;
using osm::PoiCategory;

struct GameSpaceConfig {
  Meters radius = 200.0;
  Meters cookie_spacing = 15.0;
  Meters min_edge_cookie_margin = 3.0;

  /// radius > 0, spacing > 0, 0 <= margin < spacing / 2. The spacing < radius
  /// requirement is checked by build_game_space once the stage exists.
  void validate() const;
};

using CookieId = std::uint32_t;

struct Cookie {
  CookieId id = 0;
  GeoPoint position;
  EdgeId edge = 0;
  Meters offset = 0.0;  // along the edge from endpoint a
  bool collected = false;
};

struct GameSpace {
  GeoPoint center;
  GameSpaceConfig config;
  RoadGraph graph;
  std::vector<Cookie> cookies;
  std::vector<Poi> pois;
};

/// Keeps edges whose polyline lies entirely inside the circle, drops isolated
/// nodes and keeps only the largest connected component (ties: the component
/// holding the smallest node id). Edge ids are renumbered densely in their
/// original order. Throws Error(EmptyGameSpace) when nothing survives.
RoadGraph clip_to_circle(const RoadGraph& graph, GeoPoint center, Meters radius);

/// Cookie offsets for one edge of the given length: a single midpoint cookie
/// on short edges, otherwise evenly spaced cookies inset by the margin.
std::vector<Meters> cookie_offsets(Meters length, const GameSpaceConfig& config);

/// Cookies for every edge, ids assigned in (edge id, offset) order.
std::vector<Cookie> place_cookies(const RoadGraph& graph, const GameSpaceConfig& config);

GameSpace build_game_space(const osm::Extract& extract, GeoPoint center, const GameSpaceConfig& config = {},
                           const osm::HighwayWhitelist& walkable = osm::default_walkable_highways(),
                           const osm::CategoryMap& categories = osm::default_category_map());

}  // namespace pacmap
