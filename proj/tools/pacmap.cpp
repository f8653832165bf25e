#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pacmap/error.hpp"
#include "pacmap/game_space.hpp"
#include "pacmap/osm.hpp"
#include "pacmap/serialize.hpp"
#include "pacmap/server.hpp"
#include "pacmap/sim.hpp"

namespace {

pacmap::GeoPoint parse_center(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw pacmap::Error(pacmap::ErrorCode::InvalidInput, "--center wants lat,lon");
  try {
    return pacmap::geo::make_point(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw pacmap::Error(pacmap::ErrorCode::InvalidInput, "--center wants lat,lon");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pacmap::Error(pacmap::ErrorCode::InvalidInput, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pacmap: location-based PacMan engine"};
  app.require_subcommand(1);

  std::string osm_file;
  std::string center_text;
  double radius = 200.0;
  double spacing = 15.0;
  auto* stage = app.add_subcommand("stage", "Build a game space and print it as JSON");
  stage->add_option("--osm-file", osm_file, "OSM XML or JSON extract")->required();
  stage->add_option("--center", center_text, "lat,lon")->required();
  stage->add_option("--radius", radius, "Game space radius in metres");
  stage->add_option("--spacing", spacing, "Cookie spacing in metres");

  std::string stage_file;
  std::string trace_file;
  std::uint64_t seed = 0;
  double duration = 0.0;
  double tick_seconds = 0.2;
  auto* replay = app.add_subcommand("replay", "Run a trace headlessly and print the event log");
  replay->add_option("--stage", stage_file, "Stage JSON from `pacmap stage`")->required();
  replay->add_option("--trace", trace_file, "JSON-lines GPS trace")->required();
  replay->add_option("--seed", seed, "RNG seed");
  replay->add_option("--duration", duration, "Minimum game time to simulate (s)");
  replay->add_option("--tick", tick_seconds, "Tick length (s)");

  std::size_t nodes = 420;
  std::size_t queries = 1000;
  double edge_length = 50.0;
  auto* bench = app.add_subcommand("bench", "Time shortest_path on a synthetic grid");
  bench->add_option("--nodes", nodes, "Grid node count");
  bench->add_option("--queries", queries, "Measured queries");
  bench->add_option("--edge-length", edge_length, "Grid spacing in metres");
  bench->add_option("--seed", seed, "Query RNG seed");

  pacmap::ServerOptions server_options;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/WebSocket game server");
  serve->add_option("--osm-file", osm_file, "OSM XML or JSON extract")->required();
  serve->add_option("--port", server_options.port, "Listen port (0 picks one)");
  serve->add_option("--address", server_options.address, "Listen address");
  serve->add_option("--time-scale", server_options.time_scale, "Game seconds per wall-clock second");
  serve->add_option("--threads", server_options.threads, "I/O threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stage) {
      pacmap::GameSpaceConfig config;
      config.radius = radius;
      config.cookie_spacing = spacing;
      const auto extract = pacmap::osm::load_extract(osm_file);
      const auto space = pacmap::build_game_space(extract, parse_center(center_text), config);
      std::cout << pacmap::stage_to_json(space).dump(1) << '\n';
    } else if (*replay) {
      const auto space = pacmap::stage_from_json(nlohmann::json::parse(read_file(stage_file)));
      pacmap::SessionConfig config;
      config.seed = seed;
      config.tick_seconds = tick_seconds;
      const auto trace = pacmap::sim::load_trace(trace_file);
      std::cout << pacmap::to_json_lines(pacmap::sim::run_trace(space, config, trace, duration));
    } else if (*bench) {
      const auto graph = pacmap::sim::generate_synthetic_grid(nodes, edge_length, {39.1040, 26.5560});
      const auto report = pacmap::sim::bench_dijkstra(graph, queries, seed);
      auto out = report.to_json();
      out["bound_ms"] = 95.0;
      out["within_bound"] = report.median_ms <= 95.0;
      std::cout << out.dump(1) << '\n';
    } else if (*serve) {
      pacmap::GameServer server(pacmap::osm::load_extract(osm_file), server_options);
      server.start();
      std::cerr << "listening on " << server_options.address << ':' << server.port() << '\n';
      server.wait();
    }
  } catch (const pacmap::ParseError& e) {
    std::cerr << "parse error at " << e.line() << ':' << e.column() << ": " << e.what() << '\n';
    return 2;
  } catch (const pacmap::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
