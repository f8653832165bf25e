#include "pacmap/ghost_ai.hpp"

#include <algorithm>
#include <cmath>

#include "pacmap/error.hpp"

namespace pacmap {
namespace {

struct EdgePosition {
  EdgeId edge;
  Meters offset;
};

std::size_t leg_index(const Route& route, Meters progress) {
  auto it = std::upper_bound(route.leg_start.begin(), route.leg_start.end(), progress);
  const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - route.leg_start.begin() - 1, 0));
  return std::min(idx, route.legs.size() - 1);
}

std::optional<EdgePosition> edge_position(const Route& route, Meters progress) {
  if (route.legs.empty()) return std::nullopt;
  const std::size_t i = leg_index(route, progress);
  const RouteLeg& leg = route.legs[i];
  const Meters local = progress - route.leg_start[i];
  if (local >= leg.length()) return EdgePosition{leg.edge, leg.to};
  const Meters offset = leg.from < leg.to ? leg.from + local : leg.from - local;
  return EdgePosition{leg.edge, offset};
}

Path single_edge_path(const Edge& e, NodeId from) {
  Path p;
  p.nodes = {from, e.other(from)};
  p.legs = {{e.id, e.a == from}};
  p.total_length = e.length;
  return p;
}

}  // namespace

std::string_view to_string(GhostKind kind) { return kind == GhostKind::Chaser ? "chaser" : "roamer"; }

std::string_view to_string(GhostColor color) {
  switch (color) {
    case GhostColor::Red: return "red";
    case GhostColor::Purple: return "purple";
    case GhostColor::Orange: return "orange";
    case GhostColor::Blue: return "blue";
  }
  return "unknown";
}

NodeId initial_heading(const RoadGraph& graph, const EdgeMatch& match) {
  const Edge& e = graph.edge(match.edge);
  return match.offset < e.length - match.offset ? e.a : e.b;
}

NodeId infer_heading(const RoadGraph& graph, const PlayerState& previous, const EdgeMatch& next) {
  const Edge& e = graph.edge(next.edge);
  if (next.edge == previous.match.edge) {
    if (next.offset > previous.match.offset) return e.b;
    if (next.offset < previous.match.offset) return e.a;
    return previous.heading_node;
  }
  const Edge& before = graph.edge(previous.match.edge);
  const bool a_shared = before.touches(e.a);
  const bool b_shared = before.touches(e.b);
  NodeId entry = e.a;
  if (a_shared != b_shared) {
    entry = a_shared ? e.a : e.b;
  } else {
    const Meters da = geo::vincenty_inverse(previous.position, e.geometry.front());
    const Meters db = geo::vincenty_inverse(previous.position, e.geometry.back());
    entry = db < da ? e.b : e.a;
  }
  return e.other(entry);
}

Path roamer_next_route(Rng& rng, const GameSpace& space, const Ghost& ghost) {
  const RoadGraph& graph = space.graph;
  const NodeId here = nearest_node(graph, ghost.position);

  auto draw_target = [&] {
    const double first = rng.uniform01() * 360.0;
    const double second = rng.uniform01() * 360.0;
    const double bearing = ghost.has_history ? second : first;
    return nearest_node(graph, geo::vincenty_direct(space.center, bearing, space.config.radius));
  };

  NodeId target = draw_target();
  if (target == here) target = draw_target();
  if (target == here) {
    const auto adjacent = graph.neighbors(here);
    if (adjacent.empty()) {
      throw Error(ErrorCode::DegenerateRoute, "roamer stands on an isolated node");
    }
    const Adjacent& step = adjacent[rng.below(adjacent.size())];
    return single_edge_path(graph.edge(step.edge), here);
  }
  return shortest_path(graph, here, target);
}

Path chaser_plan(const GameSpace& space, const Ghost& ghost, const PlayerState& player) {
  return shortest_path(space.graph, nearest_node(space.graph, ghost.position), player.heading_node);
}

Path chaser_on_goal_reached(const GameSpace& space, const Ghost& ghost, const PlayerState& player) {
  const NodeId here = ghost.route ? ghost.route->goal() : nearest_node(space.graph, ghost.position);
  const Edge& player_edge = space.graph.edge(player.match.edge);
  const NodeId target = player_edge.other(player.heading_node);
  if (target != here) return shortest_path(space.graph, here, target);
  return single_edge_path(player_edge, here);
}

bool should_replan(const PlayerState& previous, const PlayerState& next) {
  return previous.match.edge != next.match.edge || previous.heading_node != next.heading_node;
}

void assign_route(Ghost& ghost, const RoadGraph& graph, Path path) {
  Route route;
  const NodeId start = path.start();
  std::optional<EdgePosition> at;
  if (ghost.route) at = edge_position(*ghost.route, ghost.path_progress);

  if (at) {
    const Edge& e = graph.edge(at->edge);
    if (e.touches(start)) {
      const Meters target = e.offset_of(start);
      if (at->offset != target) route.legs.push_back({e.id, at->offset, target});
    } else {
      ghost.position = graph.position(start);
    }
  } else {
    ghost.position = graph.position(start);
  }
  for (const PathLeg& leg : path.legs) {
    const Edge& e = graph.edge(leg.edge);
    route.legs.push_back(leg.forward ? RouteLeg{e.id, 0.0, e.length} : RouteLeg{e.id, e.length, 0.0});
  }
  for (const RouteLeg& leg : route.legs) {
    route.leg_start.push_back(route.total_length);
    route.total_length += leg.length();
  }
  route.path = std::move(path);
  ghost.route = std::move(route);
  ghost.path_progress = 0.0;
  ghost.traversed_player_edge = false;
  ghost.position = route_position(*ghost.route, graph, 0.0);
}

GeoPoint route_position(const Route& route, const RoadGraph& graph, Meters progress) {
  if (route.legs.empty()) return graph.position(route.path.start());
  if (progress >= route.total_length) return graph.position(route.goal());
  const auto at = edge_position(route, progress);
  return point_at_offset(graph.edge(at->edge), at->offset);
}

void advance_ghost(Ghost& ghost, const RoadGraph& graph, double dt, const PlayerState& player) {
  if (!ghost.route) return;
  const Route& route = *ghost.route;
  const Meters before = ghost.path_progress;
  const Meters after = std::min(before + ghost.speed * dt, route.total_length);
  for (std::size_t i = 0; i < route.legs.size(); ++i) {
    const Meters end = route.leg_start[i] + route.legs[i].length();
    if (route.legs[i].edge == player.match.edge && end > before && end <= after) {
      ghost.traversed_player_edge = true;
    }
  }
  ghost.path_progress = after;
  ghost.position = route_position(route, graph, after);
}

bool check_catch(const Ghost& ghost, const PlayerState& player, Meters catch_radius) {
  return geo::vincenty_inverse(ghost.position, player.position) <= catch_radius;
}

}  // namespace pacmap
