// Headless harness: scripted traces, replay, synthetic grids and the Dijkstra
// latency benchmark.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pacmap/session.hpp"

namespace pacmap::sim {

/// Timestamps strictly increasing.
struct Trace {
  std::vector<Fix> fixes;
};

/// JSON-lines of {"t":..., "lat":..., "lon":...}; blank lines are skipped.
/// Throws ParseError (with the line number) or Error(InvalidInput) for
/// non-increasing timestamps.
Trace parse_trace(std::string_view text);
Trace load_trace(const std::filesystem::path& path);

/// Plays the trace against a fresh session started at the stage centre.
/// Runs until max(min_duration, last fix time) or a terminal phase.
std::vector<GameEvent> run_trace(const GameSpace& space, const SessionConfig& config, const Trace& trace,
                                 double min_duration = 0.0);

/// Near-square grid: ceil(sqrt(n)) columns, rows filled row-major and the last
/// row trimmed so exactly n nodes exist. Node ids start at 1.
RoadGraph generate_synthetic_grid(std::size_t target_nodes, Meters edge_length, GeoPoint origin);

struct BenchReport {
  std::size_t node_count = 0;
  std::size_t query_count = 0;
  double min_ms = 0.0;
  double median_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
  std::vector<NodeId> starts;
  std::vector<NodeId> goals;
  std::vector<Meters> path_lengths;

  nlohmann::json to_json() const;
};

/// Random start/goal shortest_path queries, timed one by one. A warm-up batch
/// runs first and is excluded. Percentiles use the nearest-rank method.
BenchReport bench_dijkstra(const RoadGraph& graph, std::size_t queries, std::uint64_t seed,
                           std::size_t warmup = 100);

}  // namespace pacmap::sim
