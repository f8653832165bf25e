#include "pacmap/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "pacmap/protocol.hpp"
#include "pacmap/serialize.hpp"

namespace pacmap {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

// Application close codes for the play channel (4000-4999 is the private range).
constexpr std::uint16_t kCloseUnknownSession = 4404;
constexpr std::uint16_t kCloseAlreadyConnected = 4409;
constexpr std::uint16_t kCloseGameOver = 4410;

struct Game {
  Game(std::string game_id, SessionDriver d) : id(std::move(game_id)), driver(std::move(d)) {}

  std::string id;
  std::mutex mutex;  // serializes every touch of the driver
  SessionDriver driver;
  bool channel_open = false;
  std::optional<Clock::time_point> ended_at;
};

}  // namespace

struct GameServer::Impl {
  Impl(osm::Extract ex, ServerOptions opts)
      : options(std::move(opts)), extract(std::move(ex)), acceptor(ioc), sweeper(ioc) {}

  ServerOptions options;
  osm::Extract extract;
  net::io_context ioc;
  tcp::acceptor acceptor;
  net::steady_timer sweeper;
  std::vector<std::thread> threads;

  mutable std::mutex registry_mutex;
  std::map<std::string, std::shared_ptr<Game>> games;
  std::uint64_t next_id = 1;

  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  bool stopped = false;

  void accept();
  void sweep();
  std::shared_ptr<Game> find(const std::string& id) const {
    std::lock_guard lock(registry_mutex);
    const auto it = games.find(id);
    return it == games.end() ? nullptr : it->second;
  }
  http::response<http::string_body> handle(const http::request<http::string_body>& req);
  http::response<http::string_body> create_game(const http::request<http::string_body>& req);
};

namespace {

http::response<http::string_body> make_response(http::status status, std::string body, unsigned version,
                                                bool keep_alive) {
  http::response<http::string_body> res{status, version};
  res.set(http::field::server, "pacmap");
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(keep_alive);
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

std::string_view as_view(beast::string_view s) { return {s.data(), s.size()}; }

/// "/games/abc/play" -> {"abc", "play"}; anything not under /games/ -> nullopt.
std::optional<std::pair<std::string, std::string>> game_route(std::string_view target) {
  if (const auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
  constexpr std::string_view prefix = "/games/";
  if (target.substr(0, prefix.size()) != prefix) return std::nullopt;
  target.remove_prefix(prefix.size());
  const auto slash = target.find('/');
  if (slash == std::string_view::npos) return std::pair{std::string(target), std::string()};
  return std::pair{std::string(target.substr(0, slash)), std::string(target.substr(slash + 1))};
}

class PlayConnection : public std::enable_shared_from_this<PlayConnection> {
 public:
  PlayConnection(tcp::socket&& socket, std::shared_ptr<Game> game, double time_scale)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), game_(std::move(game)), time_scale_(time_scale) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&PlayConnection::on_accept, shared_from_this()));
  }

 private:
  struct Outgoing {
    std::string text;
    bool snapshot;
  };

  void on_accept(beast::error_code ec) {
    if (ec) return;
    if (!game_) return reject(kCloseUnknownSession, "unknown session");
    std::string first_snapshot;
    {
      std::lock_guard lock(game_->mutex);
      if (game_->channel_open) return reject(kCloseAlreadyConnected, "session already has a channel");
      if (game_->driver.finished()) return reject(kCloseGameOver, "game is over");
      game_->channel_open = true;
      first_snapshot = snapshot_message(game_->driver.state());
      tick_seconds_ = game_->driver.state().config.tick_seconds;
    }
    attached_ = true;
    send(std::move(first_snapshot), true);
    started_ = Clock::now();
    schedule_tick();
    read();
  }

  void reject(std::uint16_t code, const char* reason) {
    ws_.async_close(websocket::close_reason(static_cast<websocket::close_code>(code), reason),
                    [self = shared_from_this()](beast::error_code) {});
  }

  void schedule_tick() {
    const auto period = std::chrono::duration<double>(tick_seconds_ / time_scale_);
    ++ticks_;
    timer_.expires_at(started_ + std::chrono::duration_cast<Clock::duration>(period * static_cast<double>(ticks_)));
    timer_.async_wait(beast::bind_front_handler(&PlayConnection::on_tick, shared_from_this()));
  }

  void on_tick(beast::error_code ec) {
    if (ec || closing_) return;
    std::vector<GameEvent> events;
    std::string snapshot;
    std::string end;
    {
      std::lock_guard lock(game_->mutex);
      events = game_->driver.step();
      snapshot = snapshot_message(game_->driver.state());
      if (game_->driver.finished()) {
        end = end_message(game_->driver.state());
        game_->ended_at = Clock::now();
      }
    }
    for (const GameEvent& e : events) send(to_json_line(e), false);
    send(std::move(snapshot), true);
    if (end.empty()) return schedule_tick();
    send(std::move(end), false);
    close_after_drain_ = true;
  }

  void read() {
    ws_.async_read(read_buffer_, beast::bind_front_handler(&PlayConnection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return detach();
    const std::string text = beast::buffers_to_string(read_buffer_.data());
    read_buffer_.consume(read_buffer_.size());
    try {
      const Fix fix = parse_client_message(text);
      std::lock_guard lock(game_->mutex);
      game_->driver.enqueue(fix);
    } catch (const Error& e) {
      send(error_message(e.code(), e.what()), false);
    }
    read();
  }

  // Backpressure: a queued snapshot that has not started writing is replaced
  // by the newer one. Events and control messages are never dropped.
  void send(std::string text, bool snapshot) {
    if (closing_) return;
    if (snapshot) {
      const auto first_unsent = outbox_.begin() + (writing_ ? 1 : 0);
      for (auto it = first_unsent; it != outbox_.end();) it = it->snapshot ? outbox_.erase(it) : it + 1;
    }
    outbox_.push_back({std::move(text), snapshot});
    if (!writing_) write_next();
  }

  void write_next() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front().text),
                    beast::bind_front_handler(&PlayConnection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    outbox_.pop_front();
    if (ec) return detach();
    if (!outbox_.empty()) return write_next();
    writing_ = false;
    if (close_after_drain_ && !closing_) {
      closing_ = true;
      ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {
        self->detach();
      });
    }
  }

  // The session survives a dropped channel; a new channel may pick it up.
  void detach() {
    closing_ = true;
    timer_.cancel();
    if (!attached_) return;
    attached_ = false;
    std::lock_guard lock(game_->mutex);
    game_->channel_open = false;
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  std::shared_ptr<Game> game_;
  double time_scale_;
  double tick_seconds_ = 0.2;
  Clock::time_point started_;
  std::uint64_t ticks_ = 0;
  beast::flat_buffer read_buffer_;
  std::deque<Outgoing> outbox_;
  bool writing_ = false;
  bool attached_ = false;
  bool closing_ = false;
  bool close_after_drain_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, GameServer::Impl& server) : stream_(std::move(socket)), server_(server) {}

  void run() {
    net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpConnection::read, shared_from_this()));
  }

 private:
  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      const auto route = game_route(as_view(req_.target()));
      std::shared_ptr<Game> game;
      if (route && route->second == "play") game = server_.find(route->first);
      stream_.expires_never();
      std::make_shared<PlayConnection>(stream_.release_socket(), std::move(game), server_.options.time_scale)
          ->run(std::move(req_));
      return;
    }
    res_ = server_.handle(req_);
    http::async_write(stream_, res_, beast::bind_front_handler(&HttpConnection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (!res_.keep_alive()) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    read();
  }

  beast::tcp_stream stream_;
  GameServer::Impl& server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  http::response<http::string_body> res_;
};

}  // namespace

http::response<http::string_body> GameServer::Impl::create_game(const http::request<http::string_body>& req) {
  const CreateGameRequest parsed = parse_create_game(req.body());
  GameSpace space = build_game_space(extract, parsed.center, parsed.space);
  auto game = std::make_shared<Game>("", SessionDriver(std::move(space), parsed.session, parsed.center));
  {
    std::lock_guard lock(registry_mutex);
    game->id = "g" + std::to_string(next_id++);
    games.emplace(game->id, game);
  }
  std::lock_guard lock(game->mutex);
  return make_response(http::status::ok, created_game_json(game->id, game->driver.state()).dump(), req.version(),
                       req.keep_alive());
}

http::response<http::string_body> GameServer::Impl::handle(const http::request<http::string_body>& req) {
  const auto reply = [&](http::status status, std::string body) {
    return make_response(status, std::move(body), req.version(), req.keep_alive());
  };
  if (req.method() == http::verb::options) {
    auto res = reply(http::status::no_content, "");
    res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
    res.set(http::field::access_control_allow_headers, "Content-Type");
    return res;
  }
  std::string_view target = as_view(req.target());
  if (const auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
  try {
    if (target == "/games") {
      if (req.method() != http::verb::post) {
        return reply(http::status::method_not_allowed, error_message(ErrorCode::InvalidInput, "use POST"));
      }
      return create_game(req);
    }
    if (const auto route = game_route(target); route && route->second.empty()) {
      if (req.method() != http::verb::get) {
        return reply(http::status::method_not_allowed, error_message(ErrorCode::InvalidInput, "use GET"));
      }
      const auto game = find(route->first);
      if (!game) return reply(http::status::not_found, error_message(ErrorCode::InvalidInput, "unknown session"));
      std::lock_guard lock(game->mutex);
      return reply(http::status::ok, snapshot_message(game->driver.state()));
    }
    return reply(http::status::not_found, error_message(ErrorCode::InvalidInput, "no such resource"));
  } catch (const Error& e) {
    return reply(static_cast<http::status>(http_status_for(e.code())), error_message(e.code(), e.what()));
  }
}

void GameServer::Impl::accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec == net::error::operation_aborted) return;
    if (!ec) std::make_shared<HttpConnection>(std::move(socket), *this)->run();
    accept();
  });
}

void GameServer::Impl::sweep() {
  const auto period = std::chrono::duration<double>(std::clamp(options.eviction_seconds / 4.0, 0.05, 60.0));
  sweeper.expires_after(std::chrono::duration_cast<Clock::duration>(period));
  sweeper.async_wait([this](beast::error_code ec) {
    if (ec) return;
    const auto now = Clock::now();
    const auto keep_for = std::chrono::duration<double>(options.eviction_seconds);
    std::vector<std::shared_ptr<Game>> candidates;
    {
      std::lock_guard lock(registry_mutex);
      for (const auto& [id, game] : games) candidates.push_back(game);
    }
    for (const auto& game : candidates) {
      bool expired = false;
      {
        std::lock_guard lock(game->mutex);
        expired = game->ended_at && now - *game->ended_at >= keep_for;
      }
      if (expired) {
        std::lock_guard lock(registry_mutex);
        games.erase(game->id);
      }
    }
    sweep();
  });
}

GameServer::GameServer(osm::Extract extract, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(extract), std::move(options))) {
  if (!(impl_->options.time_scale > 0.0)) throw Error(ErrorCode::InvalidInput, "time scale must be positive");
  if (impl_->options.threads < 1) throw Error(ErrorCode::InvalidInput, "need at least one I/O thread");
}

GameServer::~GameServer() { stop(); }

void GameServer::start() {
  const tcp::endpoint endpoint{net::ip::make_address(impl_->options.address), impl_->options.port};
  impl_->acceptor.open(endpoint.protocol());
  impl_->acceptor.set_option(net::socket_base::reuse_address(true));
  impl_->acceptor.bind(endpoint);
  impl_->acceptor.listen(net::socket_base::max_listen_connections);
  impl_->accept();
  impl_->sweep();
  for (int i = 0; i < impl_->options.threads; ++i) impl_->threads.emplace_back([this] { impl_->ioc.run(); });
}

std::uint16_t GameServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void GameServer::wait() {
  net::signal_set signals(impl_->ioc, SIGINT, SIGTERM);
  signals.async_wait([this](beast::error_code ec, int) {
    if (!ec) {
      std::lock_guard lock(impl_->stop_mutex);
      impl_->stopped = true;
      impl_->stop_cv.notify_all();
    }
  });
  std::unique_lock lock(impl_->stop_mutex);
  impl_->stop_cv.wait(lock, [this] { return impl_->stopped; });
}

void GameServer::stop() {
  {
    std::lock_guard lock(impl_->stop_mutex);
    impl_->stopped = true;
    impl_->stop_cv.notify_all();
  }
  impl_->ioc.stop();
  for (auto& t : impl_->threads) {
    if (t.joinable()) t.join();
  }
  impl_->threads.clear();
}

std::size_t GameServer::session_count() const {
  std::lock_guard lock(impl_->registry_mutex);
  return impl_->games.size();
}

}  // namespace pacmap
