// Exhaustive simple-path enumeration for tiny graphs.
#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace oracle {

struct WeightedEdge {
  int a, b;
  double length;
};

/// Minimum summed length over every simple path from s to t, or +inf.
inline double shortest_simple_path(int node_count, const std::vector<WeightedEdge>& edges, int s, int t) {
  std::vector<std::vector<std::pair<int, double>>> adj(node_count);
  for (const auto& e : edges) {
    adj[e.a].push_back({e.b, e.length});
    adj[e.b].push_back({e.a, e.length});
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> on_path(node_count, false);
  std::function<void(int, double)> dfs = [&](int u, double acc) {
    if (u == t) {
      best = std::min(best, acc);
      return;
    }
    on_path[u] = true;
    for (const auto& [v, w] : adj[u]) {
      if (!on_path[v]) dfs(v, acc + w);
    }
    on_path[u] = false;
  };
  dfs(s, 0.0);
  return best;
}

}  // namespace oracle
