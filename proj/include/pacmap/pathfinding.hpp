// The in-process directions service: Dijkstra over the road graph, nearest
// node snapping and single-fix map matching.
#pragma once

#include <vector>

#include "pacmap/road_graph.hpp"

namespace pacmap {

struct PathLeg {
  EdgeId edge = 0;
  bool forward = true;  // traversed from endpoint a to endpoint b

  friend bool operator==(const PathLeg&, const PathLeg&) = default;
};

struct Path {
  std::vector<NodeId> nodes;
  std::vector<PathLeg> legs;
  Meters total_length = 0.0;

  NodeId start() const { return nodes.front(); }
  NodeId goal() const { return nodes.back(); }

  friend bool operator==(const Path&, const Path&) = default;
};

/// Minimum-length path. Equal-cost predecessors resolve to the smaller node id
/// (then the smaller edge id), so results are reproducible. Throws
/// Error(UnknownNode) or Error(NoPath).
Path shortest_path(const RoadGraph& graph, NodeId start, NodeId goal);

/// Single-source distances in dense index order; unreachable nodes are +inf.
std::vector<Meters> distances_from(const RoadGraph& graph, NodeId source);

/// Closest node by geodesic distance; ties within 1e-9 m go to the smaller id.
NodeId nearest_node(const RoadGraph& graph, GeoPoint p);

struct EdgeMatch {
  EdgeId edge = 0;
  Meters offset = 0.0;  // arc length from endpoint a
  GeoPoint projected;
  Meters lateral_error = 0.0;
};

/// Projects p onto every edge polyline in a local plane about p and keeps the
/// closest (ties within 1e-9 m: smaller edge id).
EdgeMatch match_to_edge(const RoadGraph& graph, GeoPoint p);

}  // namespace pacmap
