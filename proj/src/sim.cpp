#include "pacmap/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pacmap/error.hpp"
#include "pacmap/pathfinding.hpp"

namespace pacmap::sim {

using json = nlohmann::json;

Trace parse_trace(std::string_view text) {
  Trace trace;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    Fix fix;
    try {
      const json j = json::parse(line);
      fix.t = j.at("t").get<double>();
      fix.position = geo::make_point(j.at("lat").get<double>(), j.at("lon").get<double>());
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad trace line: ") + e.what(), line_no, 1);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, 1);
    }
    if (!std::isfinite(fix.t) || fix.t < 0.0) throw ParseError("trace timestamps must be >= 0", line_no, 1);
    if (!trace.fixes.empty() && fix.t <= trace.fixes.back().t) {
      throw Error(ErrorCode::InvalidInput,
                  "trace timestamps must be strictly increasing (line " + std::to_string(line_no) + ")");
    }
    trace.fixes.push_back(fix);
    if (end == text.size()) break;
  }
  return trace;
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str());
}

std::vector<GameEvent> run_trace(const GameSpace& space, const SessionConfig& config, const Trace& trace,
                                 double min_duration) {
  SessionDriver driver(space, config, space.center);
  for (const Fix& fix : trace.fixes) driver.enqueue(fix);
  const double end = std::max(min_duration, trace.fixes.empty() ? 0.0 : trace.fixes.back().t);
  while (!driver.finished() && driver.state().clock < end - kTimeEpsilon) driver.step();
  return driver.state().events;
}

RoadGraph generate_synthetic_grid(std::size_t target_nodes, Meters edge_length, GeoPoint origin) {
  if (target_nodes < 4) throw Error(ErrorCode::InvalidInput, "a synthetic grid needs at least 4 nodes");
  if (!(edge_length > 0.0)) throw Error(ErrorCode::InvalidInput, "grid edge length must be positive");
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(target_nodes))));

  // Rows are laid out along the meridian through the origin; each row runs
  // due east along its own geodesic, so horizontal neighbours are exactly
  // edge_length apart and vertical ones agree to well under a millimetre.
  std::map<NodeId, GeoPoint> nodes;
  auto id_of = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c + 1); };
  for (std::size_t i = 0; i < target_nodes; ++i) {
    const std::size_t r = i / cols, c = i % cols;
    const GeoPoint row_start = geo::vincenty_direct(origin, 0.0, static_cast<double>(r) * edge_length);
    nodes.emplace(id_of(r, c), geo::vincenty_direct(row_start, 90.0, static_cast<double>(c) * edge_length));
  }
  std::vector<EdgeDraft> drafts;
  for (std::size_t i = 0; i < target_nodes; ++i) {
    const std::size_t r = i / cols, c = i % cols;
    if (c + 1 < cols && i + 1 < target_nodes) drafts.push_back({id_of(r, c), id_of(r, c + 1), {}});
    if (i + cols < target_nodes) drafts.push_back({id_of(r, c), id_of(r + 1, c), {}});
  }
  return RoadGraph(nodes, std::move(drafts));
}

json BenchReport::to_json() const {
  return {{"node_count", node_count},
          {"query_count", query_count},
          {"latency_ms", {{"min", min_ms}, {"median", median_ms}, {"p99", p99_ms}, {"max", max_ms}}},
          {"path_lengths", path_lengths}};
}

BenchReport bench_dijkstra(const RoadGraph& graph, std::size_t queries, std::uint64_t seed, std::size_t warmup) {
  if (graph.empty() || queries == 0) throw Error(ErrorCode::InvalidInput, "benchmark needs nodes and queries");
  Rng rng(seed);
  const std::size_t n = graph.node_count();
  auto pick = [&] { return graph.id_at(static_cast<std::size_t>(rng.below(n))); };

  // Warm-up draws come from a separate generator so the measured query
  // sequence depends only on the seed.
  Rng warm_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  volatile double sink = 0.0;
  for (std::size_t i = 0; i < warmup; ++i) {
    sink = sink + shortest_path(graph, graph.id_at(warm_rng.below(n)), graph.id_at(warm_rng.below(n))).total_length;
  }

  BenchReport report;
  report.node_count = n;
  report.query_count = queries;
  std::vector<double> latencies;
  latencies.reserve(queries);
  for (std::size_t i = 0; i < queries; ++i) {
    const NodeId s = pick();
    const NodeId g = pick();
    const auto t0 = std::chrono::steady_clock::now();
    const Path path = shortest_path(graph, s, g);
    const auto t1 = std::chrono::steady_clock::now();
    latencies.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    report.starts.push_back(s);
    report.goals.push_back(g);
    report.path_lengths.push_back(path.total_length);
  }
  std::sort(latencies.begin(), latencies.end());
  auto rank = [&](double q) {
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(latencies.size())));
    return latencies[std::clamp<std::size_t>(k, 1, latencies.size()) - 1];
  };
  report.min_ms = latencies.front();
  report.median_ms = rank(0.5);
  report.p99_ms = rank(0.99);
  report.max_ms = latencies.back();
  return report;
}

}  // namespace pacmap::sim
