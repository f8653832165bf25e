#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pacmap/geodesy.hpp"

namespace pacmap {

using geo::GeoPoint;
using geo::Meters;

using NodeId = std::int64_t;
using EdgeId = std::uint32_t;

/// Undirected road segment between two intersections (or way ends).
struct Edge {
  EdgeId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  Meters length = 0.0;
  std::vector<GeoPoint> geometry;  // front() at a, back() at b
  std::vector<Meters> cumulative;  // arc length at each geometry vertex

  NodeId other(NodeId endpoint) const { return endpoint == a ? b : a; }
  bool touches(NodeId n) const { return n == a || n == b; }
  /// Offset of an endpoint measured from a.
  Meters offset_of(NodeId endpoint) const { return endpoint == a ? 0.0 : length; }
};

struct Adjacent {
  NodeId neighbor = 0;
  EdgeId edge = 0;
};

/// Input to RoadGraph construction. An empty geometry means a straight
/// two-point polyline between the endpoint positions.
struct EdgeDraft {
  NodeId a = 0;
  NodeId b = 0;
  std::vector<GeoPoint> geometry;
};

/// Immutable road graph. Node ids are kept sorted so the dense index order is
/// the node-id order, which is what the deterministic tie-breaking relies on.
/// Edge ids are dense: edges()[i].id == i.
class RoadGraph {
 public:
  RoadGraph() = default;
  RoadGraph(const std::map<NodeId, GeoPoint>& nodes, std::vector<EdgeDraft> edges);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return ids_.empty(); }

  std::span<const NodeId> node_ids() const { return ids_; }
  std::span<const Edge> edges() const { return edges_; }

  bool contains(NodeId id) const { return index_of(id).has_value(); }
  std::optional<std::size_t> index_of(NodeId id) const;

  /// Throws Error(UnknownNode).
  GeoPoint position(NodeId id) const;
  std::span<const Adjacent> neighbors(NodeId id) const;
  std::size_t degree(NodeId id) const { return neighbors(id).size(); }

  const Edge& edge(EdgeId id) const;

  NodeId id_at(std::size_t index) const { return ids_[index]; }
  GeoPoint position_at(std::size_t index) const { return positions_[index]; }
  std::span<const Adjacent> neighbors_at(std::size_t index) const { return adjacency_[index]; }

 private:
  std::size_t require_index(NodeId id) const;

  std::vector<NodeId> ids_;
  std::vector<GeoPoint> positions_;
  std::vector<std::vector<Adjacent>> adjacency_;
  std::vector<Edge> edges_;
};

/// Geodesic length of a polyline.
Meters polyline_length(std::span<const GeoPoint> points);

/// Point on the edge polyline `offset` metres from endpoint a (clamped).
GeoPoint point_at_offset(const Edge& edge, Meters offset);

}  // namespace pacmap
