#include "pacmap/osm.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include "json.hpp"

#include "pacmap/error.hpp"

namespace pacmap::osm {
namespace {

namespace pt = boost::property_tree;
using json = nlohmann::json;

std::int64_t parse_id(const std::string& text, std::string_view what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad " + std::string(what) + " '" + text + "'", 0, 0);
  }
  return value;
}

double parse_coord(const std::string& text, std::string_view what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad " + std::string(what) + " '" + text + "'", 0, 0);
  }
}

void add_node(Extract& out, NodeId id, double lat, double lon, Tags tags) {
  GeoPoint p;
  try {
    p = geo::make_point(lat, lon);
  } catch (const Error& e) {
    throw ParseError("node " + std::to_string(id) + ": " + e.what(), 0, 0);
  }
  if (!out.nodes.emplace(id, p).second) {
    throw ParseError("duplicate node id " + std::to_string(id), 0, 0);
  }
  if (!tags.empty()) out.tagged_nodes.push_back({id, std::move(tags)});
}

Tags xml_tags(const pt::ptree& element) {
  Tags tags;
  for (const auto& [name, child] : element) {
    if (name != "tag") continue;
    tags[child.get<std::string>("<xmlattr>.k", "")] = child.get<std::string>("<xmlattr>.v", "");
  }
  return tags;
}

Extract parse_xml(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser::xml_parser_error& e) {
    throw ParseError(e.message(), e.line(), 0);
  }
  auto root = tree.get_child_optional("osm");
  if (!root) throw ParseError("missing <osm> root element", 1, 0);

  Extract out;
  for (const auto& [name, element] : *root) {
    if (name == "node") {
      const auto id = parse_id(element.get<std::string>("<xmlattr>.id", ""), "node id");
      add_node(out, id, parse_coord(element.get<std::string>("<xmlattr>.lat", ""), "lat"),
               parse_coord(element.get<std::string>("<xmlattr>.lon", ""), "lon"), xml_tags(element));
    } else if (name == "way") {
      Way way;
      way.id = parse_id(element.get<std::string>("<xmlattr>.id", ""), "way id");
      for (const auto& [child_name, child] : element) {
        if (child_name == "nd") way.refs.push_back(parse_id(child.get<std::string>("<xmlattr>.ref", ""), "nd ref"));
      }
      way.tags = xml_tags(element);
      out.ways.push_back(std::move(way));
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Tags json_tags(const json& element) {
  Tags tags;
  if (auto it = element.find("tags"); it != element.end() && it->is_object()) {
    for (const auto& [k, v] : it->items()) tags[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  return tags;
}

Extract parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    throw ParseError(e.what(), line, column);
  }
  if (!doc.is_object() || !doc.contains("elements") || !doc["elements"].is_array()) {
    throw ParseError("OSM JSON must be an object with an 'elements' array", 1, 1);
  }
  Extract out;
  try {
    for (const auto& element : doc["elements"]) {
      const std::string type = element.at("type").get<std::string>();
      if (type == "node") {
        add_node(out, element.at("id").get<NodeId>(), element.at("lat").get<double>(),
                 element.at("lon").get<double>(), json_tags(element));
      } else if (type == "way") {
        Way way;
        way.id = element.at("id").get<std::int64_t>();
        way.refs = element.at("nodes").get<std::vector<NodeId>>();
        way.tags = json_tags(element);
        out.ways.push_back(std::move(way));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed element: ") + e.what(), 0, 0);
  }
  return out;
}

// Consecutive repeated refs carry no geometry.
std::vector<NodeId> collapse_repeats(const std::vector<NodeId>& refs) {
  std::vector<NodeId> out;
  out.reserve(refs.size());
  for (NodeId r : refs) {
    if (out.empty() || out.back() != r) out.push_back(r);
  }
  return out;
}

}  // namespace

void check_references(const Extract& extract) {
  std::set<NodeId> missing;
  for (const auto& way : extract.ways) {
    for (NodeId r : way.refs) {
      if (!extract.nodes.contains(r)) missing.insert(r);
    }
  }
  if (!missing.empty()) throw DanglingReferenceError({missing.begin(), missing.end()});
}

Extract parse_extract(std::string_view text, Format format) {
  Extract out = format == Format::Xml ? parse_xml(text) : parse_json(text);
  check_references(out);
  return out;
}

Extract load_extract(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Format format = Format::Xml;
  if (path.extension() == ".json") {
    format = Format::Json;
  } else {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') format = Format::Json;
  }
  return parse_extract(text, format);
}

const HighwayWhitelist& default_walkable_highways() {
  static const HighwayWhitelist kWalkable = {"residential", "footway", "path",    "pedestrian",
                                            "living_street", "service", "tertiary", "secondary",
                                            "primary",     "unclassified"};
  return kWalkable;
}

RoadGraph build_road_graph(const Extract& extract, const HighwayWhitelist& walkable) {
  check_references(extract);

  std::vector<std::vector<NodeId>> retained;
  for (const auto& way : extract.ways) {
    auto hw = way.tags.find("highway");
    if (hw == way.tags.end() || !walkable.contains(hw->second)) continue;
    auto refs = collapse_repeats(way.refs);
    if (refs.size() >= 2) retained.push_back(std::move(refs));
  }

  std::unordered_map<NodeId, int> uses;
  for (const auto& refs : retained) {
    for (NodeId r : refs) ++uses[r];
  }

  std::vector<std::vector<NodeId>> segments;
  auto emit = [&segments](std::vector<NodeId> seg) {
    if (seg.front() == seg.back()) {
      // A loop between one split node; its middle vertex becomes a node.
      if (seg.size() < 3) return;
      const std::size_t mid = seg.size() / 2;
      segments.emplace_back(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(mid) + 1);
      segments.emplace_back(seg.begin() + static_cast<std::ptrdiff_t>(mid), seg.end());
      return;
    }
    segments.push_back(std::move(seg));
  };
  for (const auto& refs : retained) {
    std::size_t start = 0;
    for (std::size_t i = 1; i < refs.size(); ++i) {
      if (i + 1 == refs.size() || uses[refs[i]] >= 2) {
        emit({refs.begin() + static_cast<std::ptrdiff_t>(start), refs.begin() + static_cast<std::ptrdiff_t>(i) + 1});
        start = i;
      }
    }
  }

  std::map<NodeId, GeoPoint> nodes;
  std::vector<EdgeDraft> drafts;
  std::set<std::vector<NodeId>> seen;
  for (auto& seg : segments) {
    std::vector<NodeId> key = seg;
    if (key.front() > key.back()) std::reverse(key.begin(), key.end());
    if (!seen.insert(key).second) continue;

    EdgeDraft draft{seg.front(), seg.back(), {}};
    draft.geometry.reserve(seg.size());
    for (NodeId r : seg) draft.geometry.push_back(extract.nodes.at(r));
    if (!(polyline_length(draft.geometry) > 0.0)) continue;
    nodes.emplace(draft.a, draft.geometry.front());
    nodes.emplace(draft.b, draft.geometry.back());
    drafts.push_back(std::move(draft));
  }
  if (drafts.empty()) throw Error(ErrorCode::EmptyGraph, "no way matches the walkable highway whitelist");
  return RoadGraph(nodes, std::move(drafts));
}

std::string_view to_string(PoiCategory category) {
  return category == PoiCategory::LifeBoost ? "LifeBoost" : "VisibilityTrap";
}

const CategoryMap& default_category_map() {
  static const CategoryMap kMap = {
      {"amenity", "pharmacy", PoiCategory::LifeBoost},
      {"amenity", "hospital", PoiCategory::LifeBoost},
      {"amenity", "bar", PoiCategory::VisibilityTrap},
      {"amenity", "pub", PoiCategory::VisibilityTrap},
      {"amenity", "nightclub", PoiCategory::VisibilityTrap},
  };
  return kMap;
}

std::vector<Poi> classify_pois(const Extract& extract, const CategoryMap& categories) {
  std::vector<Poi> out;
  for (const auto& tagged : extract.tagged_nodes) {
    auto pos = extract.nodes.find(tagged.id);
    if (pos == extract.nodes.end()) continue;
    for (const auto& rule : categories) {
      auto tag = tagged.tags.find(rule.key);
      if (tag != tagged.tags.end() && tag->second == rule.value) {
        out.push_back({tagged.id, pos->second, rule.category, false});
        break;
      }
    }
  }
  return out;
}

}  // namespace pacmap::osm
