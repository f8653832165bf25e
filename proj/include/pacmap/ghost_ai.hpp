// Ghost behaviour: random roamers, the red chaser with replanning, movement
// along planned routes and catch detection.
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pacmap/game_space.hpp"
#include "pacmap/pathfinding.hpp"
#include "pacmap/rng.hpp"

namespace pacmap {

enum class GhostKind { Chaser, Roamer };
enum class GhostColor { Red, Purple, Orange, Blue };

std::string_view to_string(GhostKind kind);
std::string_view to_string(GhostColor color);

/// A stretch of one edge, as offsets from its endpoint a. `from > to` means
/// the ghost walks towards a.
struct RouteLeg {
  EdgeId edge = 0;
  Meters from = 0.0;
  Meters to = 0.0;

  Meters length() const { return from < to ? to - from : from - to; }
};

/// What a ghost actually walks: an optional partial lead-in leg onto the
/// path's start node, followed by the path's full edges.
struct Route {
  Path path;
  std::vector<RouteLeg> legs;
  std::vector<Meters> leg_start;  // progress at which each leg begins
  Meters total_length = 0.0;

  NodeId goal() const { return path.goal(); }
};

struct Ghost {
  int id = 0;
  GhostKind kind = GhostKind::Roamer;
  GhostColor color = GhostColor::Purple;
  GeoPoint position;
  std::optional<Route> route;
  Meters path_progress = 0.0;
  double speed = 1.6;
  bool traversed_player_edge = false;
  bool has_history = false;  // a roamer that already completed a route

  bool route_exhausted() const { return !route || path_progress >= route->total_length; }
};

struct PlayerState {
  GeoPoint position;
  EdgeMatch match;
  NodeId heading_node = 0;  // endpoint of match.edge the player walks towards
  int lives = 0;
  int score = 0;
  std::optional<double> trapped_until;
};

/// Heading for a first fix: the nearer endpoint of the matched edge (ties: b).
NodeId initial_heading(const RoadGraph& graph, const EdgeMatch& match);

/// Heading after a new fix. Same edge: offset up => b, down => a, equal =>
/// unchanged. New edge: the endpoint away from where the player entered it.
NodeId infer_heading(const RoadGraph& graph, const PlayerState& previous, const EdgeMatch& next);

/// Two uniform bearings are drawn per call; the first is used for a ghost
/// without history, the second afterwards. The arc point at that bearing and
/// the stage radius is snapped to the nearest node. A route that would end on
/// the ghost's own node is redrawn once, then replaced by a step to a random
/// neighbour.
Path roamer_next_route(Rng& rng, const GameSpace& space, const Ghost& ghost);

/// Shortest path from the node nearest the ghost to the player's heading node.
Path chaser_plan(const GameSpace& space, const Ghost& ghost, const PlayerState& player);

/// Re-target after reaching the goal without crossing the player's edge: head
/// for the player edge's endpoint opposite the heading node; when the ghost
/// already stands there, walk the player's edge itself.
Path chaser_on_goal_reached(const GameSpace& space, const Ghost& ghost, const PlayerState& player);

/// True iff the player changed edge, or changed heading on the same edge.
bool should_replan(const PlayerState& previous, const PlayerState& next);

/// Installs a new path on the ghost. If the ghost stands mid-edge on an edge
/// ending at the path's start, a partial lead-in leg is prepended; otherwise
/// the ghost is placed on the start node. Resets progress and the
/// traversed-player-edge flag.
void assign_route(Ghost& ghost, const RoadGraph& graph, Path path);

/// Moves the ghost speed * dt along its route (clamped at the end) and sets
/// traversed_player_edge when a leg on the player's edge is completed.
void advance_ghost(Ghost& ghost, const RoadGraph& graph, double dt, const PlayerState& player);

/// Where on the graph a route places its ghost at the given progress.
GeoPoint route_position(const Route& route, const RoadGraph& graph, Meters progress);

/// Closed boundary: distance == radius catches.
bool check_catch(const Ghost& ghost, const PlayerState& player, Meters catch_radius);

}  // namespace pacmap
