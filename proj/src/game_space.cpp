#include "pacmap/game_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "pacmap/error.hpp"

namespace pacmap {

void GameSpaceConfig::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidInput, "game space radius must be positive");
  }
  if (!(cookie_spacing > 0.0) || !std::isfinite(cookie_spacing)) {
    throw Error(ErrorCode::InvalidInput, "cookie spacing must be positive");
  }
  if (!(min_edge_cookie_margin >= 0.0) || !(min_edge_cookie_margin < cookie_spacing / 2.0)) {
    throw Error(ErrorCode::InvalidInput, "cookie margin must be in [0, spacing/2)");
  }
}

RoadGraph clip_to_circle(const RoadGraph& graph, GeoPoint center, Meters radius) {
  auto inside = [&](GeoPoint p) { return geo::vincenty_inverse(center, p) <= radius; };

  std::vector<const Edge*> kept;
  for (const Edge& e : graph.edges()) {
    if (std::all_of(e.geometry.begin(), e.geometry.end(), inside)) kept.push_back(&e);
  }
  if (kept.empty()) throw Error(ErrorCode::EmptyGameSpace, "no road segment lies inside the game circle");

  // Union-find over the surviving edges.
  std::map<NodeId, NodeId> parent;
  std::function<NodeId(NodeId)> find = [&](NodeId n) {
    NodeId root = n;
    while (parent[root] != root) root = parent[root];
    while (parent[n] != root) {
      NodeId next = parent[n];
      parent[n] = root;
      n = next;
    }
    return root;
  };
  for (const Edge* e : kept) {
    parent.try_emplace(e->a, e->a);
    parent.try_emplace(e->b, e->b);
  }
  for (const Edge* e : kept) {
    NodeId ra = find(e->a), rb = find(e->b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<NodeId, std::size_t> sizes;  // root -> node count; roots are component minima
  for (const auto& [node, _] : parent) ++sizes[find(node)];
  NodeId best = sizes.begin()->first;
  for (const auto& [root, size] : sizes) {
    if (size > sizes[best]) best = root;
  }

  std::map<NodeId, GeoPoint> nodes;
  std::vector<EdgeDraft> drafts;
  for (const Edge* e : kept) {
    if (find(e->a) != best) continue;
    nodes.emplace(e->a, e->geometry.front());
    nodes.emplace(e->b, e->geometry.back());
    drafts.push_back({e->a, e->b, e->geometry});
  }
  return RoadGraph(nodes, std::move(drafts));
}

std::vector<Meters> cookie_offsets(Meters length, const GameSpaceConfig& config) {
  const Meters margin = config.min_edge_cookie_margin;
  const Meters spacing = config.cookie_spacing;
  if (length < 2.0 * margin + spacing) return {length / 2.0};
  const Meters usable = length - 2.0 * margin;
  const auto n = static_cast<std::size_t>(std::floor(usable / spacing)) + 1;
  const Meters step = usable / static_cast<double>(n - 1);
  std::vector<Meters> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(margin + static_cast<double>(k) * step);
  return out;
}

std::vector<Cookie> place_cookies(const RoadGraph& graph, const GameSpaceConfig& config) {
  std::vector<Cookie> cookies;
  for (const Edge& e : graph.edges()) {
    for (Meters offset : cookie_offsets(e.length, config)) {
      cookies.push_back({static_cast<CookieId>(cookies.size()), point_at_offset(e, offset), e.id, offset, false});
    }
  }
  return cookies;
}

GameSpace build_game_space(const osm::Extract& extract, GeoPoint center, const GameSpaceConfig& config,
                           const osm::HighwayWhitelist& walkable, const osm::CategoryMap& categories) {
  config.validate();
  if (!geo::is_valid(center)) throw Error(ErrorCode::InvalidInput, "game space center is not a valid point");

  GameSpace space;
  space.center = center;
  space.config = config;
  space.graph = clip_to_circle(osm::build_road_graph(extract, walkable), center, config.radius);
  if (!(config.cookie_spacing < config.radius)) {
    throw Error(ErrorCode::InvalidInput, "cookie spacing must be smaller than the game space radius");
  }
  space.cookies = place_cookies(space.graph, config);
  for (auto& poi : osm::classify_pois(extract, categories)) {
    if (geo::vincenty_inverse(center, poi.position) <= config.radius) space.pois.push_back(poi);
  }
  return space;
}

}  // namespace pacmap
