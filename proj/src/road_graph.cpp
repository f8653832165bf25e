#include "pacmap/road_graph.hpp"

#include <algorithm>
#include <string>

#include "pacmap/error.hpp"

namespace pacmap {

RoadGraph::RoadGraph(const std::map<NodeId, GeoPoint>& nodes, std::vector<EdgeDraft> drafts) {
  ids_.reserve(nodes.size());
  positions_.reserve(nodes.size());
  for (const auto& [id, pos] : nodes) {
    if (!geo::is_valid(pos)) {
      throw Error(ErrorCode::InvalidInput, "node " + std::to_string(id) + " has an invalid position");
    }
    ids_.push_back(id);
    positions_.push_back(pos);
  }
  adjacency_.resize(ids_.size());
  edges_.reserve(drafts.size());

  for (auto& draft : drafts) {
    const std::size_t ia = require_index(draft.a);
    const std::size_t ib = require_index(draft.b);
    Edge e;
    e.id = static_cast<EdgeId>(edges_.size());
    e.a = draft.a;
    e.b = draft.b;
    if (draft.geometry.empty()) {
      e.geometry = {positions_[ia], positions_[ib]};
    } else {
      if (draft.geometry.size() < 2 || draft.geometry.front() != positions_[ia] ||
          draft.geometry.back() != positions_[ib]) {
        throw Error(ErrorCode::InvalidInput, "edge " + std::to_string(draft.a) + "-" +
                                                 std::to_string(draft.b) +
                                                 " polyline does not start/end at its endpoint nodes");
      }
      e.geometry = std::move(draft.geometry);
    }
    e.cumulative.reserve(e.geometry.size());
    e.cumulative.push_back(0.0);
    for (std::size_t i = 1; i < e.geometry.size(); ++i) {
      e.cumulative.push_back(e.cumulative.back() + geo::vincenty_inverse(e.geometry[i - 1], e.geometry[i]));
    }
    e.length = e.cumulative.back();
    if (!(e.length > 0.0)) {
      throw Error(ErrorCode::InvalidInput,
                  "zero-length edge " + std::to_string(draft.a) + "-" + std::to_string(draft.b));
    }
    adjacency_[ia].push_back({e.b, e.id});
    if (ia != ib) adjacency_[ib].push_back({e.a, e.id});
    edges_.push_back(std::move(e));
  }

  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(), [](const Adjacent& l, const Adjacent& r) {
      return l.neighbor != r.neighbor ? l.neighbor < r.neighbor : l.edge < r.edge;
    });
  }
}

std::optional<std::size_t> RoadGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t RoadGraph::require_index(NodeId id) const {
  if (auto idx = index_of(id)) return *idx;
  throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id) + " is not in the graph");
}

GeoPoint RoadGraph::position(NodeId id) const { return positions_[require_index(id)]; }

std::span<const Adjacent> RoadGraph::neighbors(NodeId id) const { return adjacency_[require_index(id)]; }

const Edge& RoadGraph::edge(EdgeId id) const {
  if (id >= edges_.size()) {
    throw Error(ErrorCode::InvalidInput, "edge " + std::to_string(id) + " is not in the graph");
  }
  return edges_[id];
}

Meters polyline_length(std::span<const GeoPoint> points) {
  Meters total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += geo::vincenty_inverse(points[i - 1], points[i]);
  return total;
}

GeoPoint point_at_offset(const Edge& edge, Meters offset) {
  if (offset <= 0.0) return edge.geometry.front();
  if (offset >= edge.length) return edge.geometry.back();
  // First vertex whose cumulative length reaches the offset.
  auto it = std::lower_bound(edge.cumulative.begin(), edge.cumulative.end(), offset);
  const std::size_t hi = static_cast<std::size_t>(it - edge.cumulative.begin());
  if (edge.cumulative[hi] == offset) return edge.geometry[hi];
  const std::size_t lo = hi - 1;
  return geo::interpolate(edge.geometry[lo], edge.geometry[hi], offset - edge.cumulative[lo]);
}

}  // namespace pacmap
