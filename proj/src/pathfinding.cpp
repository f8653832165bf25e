#include "pacmap/pathfinding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "pacmap/error.hpp"

namespace pacmap {
namespace {

constexpr double kTie = 1e-9;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Search {
  std::vector<Meters> dist;
  std::vector<std::size_t> pred;
  std::vector<EdgeId> pred_edge;
};

// Dijkstra from `source`; stops once `target` is settled when one is given.
Search dijkstra(const RoadGraph& graph, std::size_t source, std::size_t target) {
  const std::size_t n = graph.node_count();
  Search s{std::vector<Meters>(n, std::numeric_limits<Meters>::infinity()), std::vector<std::size_t>(n, kNone),
           std::vector<EdgeId>(n, 0)};
  std::vector<bool> settled(n, false);
  using Item = std::pair<Meters, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  s.dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d > s.dist[u]) continue;
    settled[u] = true;
    if (u == target) break;
    for (const Adjacent& adj : graph.neighbors_at(u)) {
      const std::size_t v = *graph.index_of(adj.neighbor);
      if (settled[v]) continue;
      const Meters nd = d + graph.edge(adj.edge).length;
      // Index order is node-id order, so `u < pred` prefers the smaller id.
      if (nd < s.dist[v] || (nd == s.dist[v] && u < s.pred[v])) {
        const bool improved = nd < s.dist[v];
        s.dist[v] = nd;
        s.pred[v] = u;
        s.pred_edge[v] = adj.edge;
        if (improved) heap.emplace(nd, v);
      }
    }
  }
  return s;
}

std::size_t require_node(const RoadGraph& graph, NodeId id) {
  if (auto idx = graph.index_of(id)) return *idx;
  throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id) + " is not in the graph");
}

}  // namespace

Path shortest_path(const RoadGraph& graph, NodeId start, NodeId goal) {
  const std::size_t s = require_node(graph, start);
  const std::size_t g = require_node(graph, goal);
  Path path;
  if (s == g) {
    path.nodes = {start};
    return path;
  }
  const Search search = dijkstra(graph, s, g);
  if (search.pred[g] == kNone) {
    throw Error(ErrorCode::NoPath, "no path from " + std::to_string(start) + " to " + std::to_string(goal));
  }
  for (std::size_t v = g; v != s; v = search.pred[v]) {
    const Edge& e = graph.edge(search.pred_edge[v]);
    path.nodes.push_back(graph.id_at(v));
    path.legs.push_back({e.id, e.b == graph.id_at(v) && e.a == graph.id_at(search.pred[v])});
  }
  path.nodes.push_back(start);
  std::reverse(path.nodes.begin(), path.nodes.end());
  std::reverse(path.legs.begin(), path.legs.end());
  for (const PathLeg& leg : path.legs) path.total_length += graph.edge(leg.edge).length;
  return path;
}

std::vector<Meters> distances_from(const RoadGraph& graph, NodeId source) {
  return dijkstra(graph, require_node(graph, source), kNone).dist;
}

NodeId nearest_node(const RoadGraph& graph, GeoPoint p) {
  if (graph.empty()) throw Error(ErrorCode::EmptyGraph, "nearest_node on an empty graph");
  std::size_t best = 0;
  Meters best_d = geo::vincenty_inverse(p, graph.position_at(0));
  for (std::size_t i = 1; i < graph.node_count(); ++i) {
    const Meters d = geo::vincenty_inverse(p, graph.position_at(i));
    if (d < best_d - kTie) {
      best = i;
      best_d = d;
    }
  }
  return graph.id_at(best);
}

EdgeMatch match_to_edge(const RoadGraph& graph, GeoPoint p) {
  if (graph.edge_count() == 0) throw Error(ErrorCode::EmptyGraph, "match_to_edge on an empty graph");
  EdgeMatch best;
  Meters best_err = std::numeric_limits<Meters>::infinity();
  for (const Edge& e : graph.edges()) {
    Meters edge_err = std::numeric_limits<Meters>::infinity();
    Meters edge_offset = 0.0;
    geo::LocalXY prev = geo::to_local_unchecked(e.geometry[0], p);
    for (std::size_t i = 1; i < e.geometry.size(); ++i) {
      const geo::LocalXY next = geo::to_local_unchecked(e.geometry[i], p);
      const double dx = next.x - prev.x, dy = next.y - prev.y;
      const double len2 = dx * dx + dy * dy;
      double t = len2 > 0.0 ? -(prev.x * dx + prev.y * dy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const Meters err = std::hypot(prev.x + t * dx, prev.y + t * dy);
      if (err < edge_err - kTie) {
        edge_err = err;
        edge_offset = e.cumulative[i - 1] + t * (e.cumulative[i] - e.cumulative[i - 1]);
      }
      prev = next;
    }
    if (edge_err < best_err - kTie) {
      best_err = edge_err;
      best.edge = e.id;
      best.offset = std::clamp(edge_offset, 0.0, e.length);
    }
  }
  best.lateral_error = best_err;
  best.projected = point_at_offset(graph.edge(best.edge), best.offset);
  return best;
}

}  // namespace pacmap
