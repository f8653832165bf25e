// HTTP + WebSocket front end. One authoritative game loop per session; the
// play channel streams event lines and snapshots to a single client.
#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "pacmap/osm.hpp"

namespace pacmap {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks a free port
  /// Game seconds per wall-clock second. 1 is real time; tests go faster.
  double time_scale = 1.0;
  int threads = 1;
  /// Terminal sessions are dropped after this many wall-clock seconds.
  double eviction_seconds = 600.0;
};

class GameServer {
 public:
  GameServer(osm::Extract extract, ServerOptions options);
  ~GameServer();
  GameServer(const GameServer&) = delete;
  GameServer& operator=(const GameServer&) = delete;

  /// Binds and starts the I/O threads; returns once listening.
  void start();
  /// Bound port (useful with port 0).
  std::uint16_t port() const;
  /// Blocks until stop() is called from another thread or a signal arrives.
  void wait();
  void stop();
  std::size_t session_count() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace pacmap
