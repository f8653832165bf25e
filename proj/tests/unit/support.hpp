#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "pacmap/game_space.hpp"
#include "pacmap/osm.hpp"

namespace testing {

inline std::filesystem::path source_path(const std::string& relative) {
  return std::filesystem::path(PACMAP_SOURCE_DIR) / relative;
}

inline constexpr pacmap::GeoPoint kCampusCenter{39.1040, 26.5560};

inline const pacmap::osm::Extract& campus_extract() {
  static const auto extract = pacmap::osm::load_extract(source_path("fixtures/campus.osm"));
  return extract;
}

inline const pacmap::GameSpace& campus_space() {
  static const auto space = pacmap::build_game_space(campus_extract(), kCampusCenter);
  return space;
}

/// Point `east`/`north` metres from the campus centre (flat approximation;
/// good to millimetres at this scale).
inline pacmap::GeoPoint campus_local(double east, double north) {
  return pacmap::geo::from_local({east, north, kCampusCenter});
}

/// Edge between two nodes (either direction), or the graph's edge count.
inline pacmap::EdgeId edge_between(const pacmap::RoadGraph& g, pacmap::NodeId a, pacmap::NodeId b) {
  for (const auto& e : g.edges()) {
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.id;
  }
  return static_cast<pacmap::EdgeId>(g.edge_count());
}

}  // namespace testing
