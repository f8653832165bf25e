// OpenStreetMap extract ingestion: parsing, walkable-way graph building and
// POI classification.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pacmap/road_graph.hpp"

namespace pacmap::osm {

using Tags = std::map<std::string, std::string>;

struct Way {
  std::int64_t id = 0;
  std::vector<NodeId> refs;
  Tags tags;
};

struct TaggedNode {
  NodeId id = 0;
  Tags tags;
};

struct Extract {
  std::map<NodeId, GeoPoint> nodes;
  std::vector<Way> ways;
  std::vector<TaggedNode> tagged_nodes;  // nodes carrying at least one tag
};

enum class Format { Xml, Json };

/// Parses an OSM XML (`<node>`, `<way>`, `<nd ref>`, `<tag k v>`) or OSM JSON
/// (`elements` array) document. Throws ParseError on malformed input and
/// DanglingReferenceError when a way names a node that is not present.
Extract parse_extract(std::string_view text, Format format);

/// Reads a file; `.json` selects JSON, anything else XML unless the content
/// starts with '{'.
Extract load_extract(const std::filesystem::path& path);

/// Throws DanglingReferenceError listing every missing node id (sorted).
void check_references(const Extract& extract);

using HighwayWhitelist = std::set<std::string, std::less<>>;

const HighwayWhitelist& default_walkable_highways();

/// Splits whitelisted highway ways at intersections (nodes used by two or more
/// retained ways) and way ends. Shape nodes become edge geometry. Throws
/// Error(EmptyGraph) when nothing survives.
RoadGraph build_road_graph(const Extract& extract,
                           const HighwayWhitelist& walkable = default_walkable_highways());

enum class PoiCategory { LifeBoost, VisibilityTrap };

std::string_view to_string(PoiCategory category);

struct Poi {
  NodeId id = 0;
  GeoPoint position;
  PoiCategory category = PoiCategory::LifeBoost;
  bool consumed = false;
};

struct CategoryRule {
  std::string key;
  std::string value;
  PoiCategory category;
};

/// First matching rule wins.
using CategoryMap = std::vector<CategoryRule>;

const CategoryMap& default_category_map();

/// Tagged nodes whose tags match the map, in input order; everything else is
/// dropped.
std::vector<Poi> classify_pois(const Extract& extract,
                               const CategoryMap& categories = default_category_map());

}  // namespace pacmap::osm
