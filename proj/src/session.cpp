#include "pacmap/session.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pacmap/error.hpp"

namespace pacmap {
namespace {

constexpr int kCookieScore = 10;

GameEvent& emit(SessionState& state, std::vector<GameEvent>& out, double time, EventKind kind) {
  GameEvent e;
  e.seq = state.events.size();
  e.time = time;
  e.kind = kind;
  out.push_back(e);
  return out.back();
}

void commit(SessionState& state, const std::vector<GameEvent>& out) {
  state.events.insert(state.events.end(), out.begin(), out.end());
}

// The seq field is assigned from the log length at emit time; events created
// within one call are committed together, so offset them by their position.
void number(SessionState& state, std::vector<GameEvent>& out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i].seq = state.events.size() + i;
}

void spawn_ghosts(SessionState& state) {
  const auto order = farthest_nodes(state.space.graph, state.player.heading_node);
  static constexpr GhostColor kColors[] = {GhostColor::Red, GhostColor::Purple, GhostColor::Orange,
                                           GhostColor::Blue};
  if (state.ghosts.empty()) {
    for (int i = 0; i < 4; ++i) {
      Ghost g;
      g.id = i;
      g.kind = i == 0 ? GhostKind::Chaser : GhostKind::Roamer;
      g.color = kColors[i];
      g.speed = state.config.ghost_speed;
      state.ghosts.push_back(g);
    }
  }
  for (std::size_t i = 0; i < state.ghosts.size(); ++i) {
    Ghost& g = state.ghosts[i];
    g.position = state.space.graph.position(order[i % order.size()]);
    g.route.reset();
    g.path_progress = 0.0;
    g.traversed_player_edge = false;
    g.has_history = false;
  }
  Ghost& chaser = state.ghosts.front();
  try {
    assign_route(chaser, state.space.graph, chaser_plan(state.space, chaser, state.player));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPath) throw;
  }
}

bool all_cookies_collected(const SessionState& state) { return state.cookies_remaining() == 0; }

void check_won(SessionState& state, std::vector<GameEvent>& out, double time) {
  if (state.phase == Phase::Running && all_cookies_collected(state) && state.player.lives > 0) {
    state.phase = Phase::Won;
    GameEvent& e = emit(state, out, time, EventKind::Won);
    e.score = state.player.score;
    e.lives = state.player.lives;
  }
}

void replan_chaser(SessionState& state, std::vector<GameEvent>& out, double time, ReplanReason reason,
                   bool goal_reached) {
  Ghost& chaser = state.ghosts.front();
  try {
    Path path = goal_reached ? chaser_on_goal_reached(state.space, chaser, state.player)
                             : chaser_plan(state.space, chaser, state.player);
    GameEvent& e = emit(state, out, time, EventKind::Replanned);
    e.ghost = chaser.id;
    e.reason = reason;
    e.node = path.goal();
    e.distance = path.total_length;
    e.path = path.nodes;
    assign_route(chaser, state.space.graph, std::move(path));
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NoPath) throw;
    chaser.route.reset();  // idle; retried next tick
  }
}

}  // namespace

void SessionConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(tick_seconds) || !positive(catch_radius) || !positive(cookie_radius) || !positive(poi_radius) ||
      !positive(ghost_speed) || !positive(trap_duration)) {
    throw Error(ErrorCode::InvalidInput, "session radii, tick, speed and trap duration must be positive");
  }
  if (initial_lives < 1 || initial_lives > max_lives) {
    throw Error(ErrorCode::InvalidInput, "need 1 <= initial_lives <= max_lives");
  }
  if (invulnerability_seconds < 0.0 || fix_tolerance < 0.0) {
    throw Error(ErrorCode::InvalidInput, "invulnerability and fix tolerance must be non-negative");
  }
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Running: return "Running";
    case Phase::Won: return "Won";
    case Phase::Lost: return "Lost";
  }
  return "Unknown";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::FixApplied: return "FixApplied";
    case EventKind::FixRejected: return "FixRejected";
    case EventKind::CookieCollected: return "CookieCollected";
    case EventKind::LifeGained: return "LifeGained";
    case EventKind::TrapEntered: return "TrapEntered";
    case EventKind::TrapExpired: return "TrapExpired";
    case EventKind::Replanned: return "Replanned";
    case EventKind::Caught: return "Caught";
    case EventKind::LifeLost: return "LifeLost";
    case EventKind::Won: return "Won";
    case EventKind::Lost: return "Lost";
  }
  return "Unknown";
}

std::string_view to_string(ReplanReason reason) {
  switch (reason) {
    case ReplanReason::EdgeChange: return "EdgeChange";
    case ReplanReason::DirectionChange: return "DirectionChange";
    case ReplanReason::GoalReached: return "GoalReached";
  }
  return "Unknown";
}

std::string_view to_string(CatchCause cause) {
  return cause == CatchCause::Proximity ? "proximity" : "edge_traversal";
}

std::size_t SessionState::cookies_remaining() const {
  return static_cast<std::size_t>(
      std::count_if(space.cookies.begin(), space.cookies.end(), [](const Cookie& c) { return !c.collected; }));
}

std::vector<NodeId> farthest_nodes(const RoadGraph& graph, NodeId from) {
  const auto dist = distances_from(graph, from);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (std::isfinite(dist[i])) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) { return dist[l] > dist[r]; });
  std::vector<NodeId> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(graph.id_at(i));
  return out;
}

SessionState create_session(GameSpace space, const SessionConfig& config, GeoPoint player_start) {
  config.validate();
  if (!geo::is_valid(player_start)) throw Error(ErrorCode::InvalidInput, "player start is not a valid point");
  if (geo::vincenty_inverse(space.center, player_start) > space.config.radius) {
    throw Error(ErrorCode::OutsideGameSpace, "player start lies outside the game space circle");
  }
  SessionState state;
  state.space = std::move(space);
  state.config = config;
  state.rng = Rng(config.seed);
  state.player.match = match_to_edge(state.space.graph, player_start);
  state.player.position = state.player.match.projected;
  state.player.heading_node = initial_heading(state.space.graph, state.player.match);
  state.player.lives = config.initial_lives;
  spawn_ghosts(state);
  return state;
}

std::vector<GameEvent> apply_fix(SessionState& state, GeoPoint fix, double time) {
  std::vector<GameEvent> out;
  if (state.phase != Phase::Running) return out;
  if (!std::isfinite(time) || time < std::max(state.clock, state.last_fix_time) - kTimeEpsilon) {
    throw Error(ErrorCode::StaleFix, "fix at t=" + std::to_string(time) + " precedes game time " +
                                         std::to_string(std::max(state.clock, state.last_fix_time)));
  }
  if (!geo::is_valid(fix)) throw Error(ErrorCode::InvalidInput, "fix is not a valid WGS84 point");
  state.last_fix_time = std::max(state.last_fix_time, time);

  const Meters from_center = geo::vincenty_inverse(state.space.center, fix);
  if (from_center > state.space.config.radius + state.config.fix_tolerance) {
    GameEvent& e = emit(state, out, time, EventKind::FixRejected);
    e.position = fix;
    e.distance = from_center;
    number(state, out);
    commit(state, out);
    return out;
  }

  const RoadGraph& graph = state.space.graph;
  const PlayerState previous = state.player;
  PlayerState& player = state.player;
  player.match = match_to_edge(graph, fix);
  player.position = player.match.projected;
  player.heading_node = infer_heading(graph, previous, player.match);
  {
    GameEvent& e = emit(state, out, time, EventKind::FixApplied);
    e.position = fix;
    e.edge = player.match.edge;
    e.offset = player.match.offset;
    e.node = player.heading_node;
  }

  for (Cookie& cookie : state.space.cookies) {
    if (cookie.collected || geo::vincenty_inverse(player.position, cookie.position) > state.config.cookie_radius) {
      continue;
    }
    cookie.collected = true;
    player.score += kCookieScore;
    GameEvent& e = emit(state, out, time, EventKind::CookieCollected);
    e.subject = cookie.id;
    e.score = player.score;
  }

  for (Poi& poi : state.space.pois) {
    const bool inside = geo::vincenty_inverse(player.position, poi.position) <= state.config.poi_radius;
    if (poi.category == PoiCategory::LifeBoost) {
      if (!inside || poi.consumed) continue;
      poi.consumed = true;
      const bool capped = player.lives >= state.config.max_lives;
      if (!capped) ++player.lives;
      GameEvent& e = emit(state, out, time, EventKind::LifeGained);
      e.subject = poi.id;
      e.lives = player.lives;
      e.capped = capped;
    } else if (inside) {
      if (state.traps_inside.insert(poi.id).second) {
        player.trapped_until = time + state.config.trap_duration;
        GameEvent& e = emit(state, out, time, EventKind::TrapEntered);
        e.subject = poi.id;
        e.until = *player.trapped_until;
      }
    } else {
      state.traps_inside.erase(poi.id);
    }
  }

  if (should_replan(previous, player)) {
    const auto reason =
        previous.match.edge != player.match.edge ? ReplanReason::EdgeChange : ReplanReason::DirectionChange;
    replan_chaser(state, out, time, reason, false);
  }

  check_won(state, out, time);
  number(state, out);
  commit(state, out);
  return out;
}

std::vector<GameEvent> tick(SessionState& state) {
  std::vector<GameEvent> out;
  if (state.phase != Phase::Running) return out;

  const double dt = state.config.tick_seconds;
  ++state.tick_count;
  state.clock = static_cast<double>(state.tick_count) * dt;
  const double now = state.clock;
  const RoadGraph& graph = state.space.graph;
  PlayerState& player = state.player;

  if (player.trapped_until && now >= *player.trapped_until - kTimeEpsilon) {
    player.trapped_until.reset();
    emit(state, out, now, EventKind::TrapExpired);
  }

  for (Ghost& ghost : state.ghosts) advance_ghost(ghost, graph, dt, player);

  const bool invulnerable = now < state.invulnerable_until - kTimeEpsilon;
  for (Ghost& ghost : state.ghosts) {
    if (ghost.kind == GhostKind::Roamer) {
      if (!ghost.route_exhausted()) continue;
      if (ghost.route) ghost.has_history = true;
      try {
        assign_route(ghost, graph, roamer_next_route(state.rng, state.space, ghost));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateRoute && e.code() != ErrorCode::NoPath) throw;
      }
      continue;
    }
    if (!ghost.route) {
      try {
        assign_route(ghost, graph, chaser_plan(state.space, ghost, player));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoPath) throw;
      }
    } else if (ghost.route_exhausted() && (!ghost.traversed_player_edge || invulnerable)) {
      replan_chaser(state, out, now, ReplanReason::GoalReached, true);
    }
  }

  if (!invulnerable) {
    for (const Ghost& ghost : state.ghosts) {
      const Meters gap = geo::vincenty_inverse(ghost.position, player.position);
      std::optional<CatchCause> cause;
      if ((ghost.kind == GhostKind::Chaser || state.config.roamers_catch) &&
          check_catch(ghost, player, state.config.catch_radius)) {
        cause = CatchCause::Proximity;
      } else if (ghost.kind == GhostKind::Chaser && ghost.route && ghost.route_exhausted() &&
                 ghost.traversed_player_edge) {
        cause = CatchCause::EdgeTraversal;
      }
      if (!cause) continue;

      GameEvent& caught = emit(state, out, now, EventKind::Caught);
      caught.ghost = ghost.id;
      caught.cause = *cause;
      caught.distance = gap;
      --player.lives;
      emit(state, out, now, EventKind::LifeLost).lives = player.lives;
      if (player.lives <= 0) {
        state.phase = Phase::Lost;
        GameEvent& lost = emit(state, out, now, EventKind::Lost);
        lost.score = player.score;
        lost.lives = 0;
      } else {
        spawn_ghosts(state);
        state.invulnerable_until = now + state.config.invulnerability_seconds;
      }
      break;
    }
  }

  check_won(state, out, now);
  number(state, out);
  commit(state, out);
  return out;
}

SessionDriver::SessionDriver(GameSpace space, const SessionConfig& config, GeoPoint player_start)
    : state_(create_session(std::move(space), config, player_start)) {}

double SessionDriver::next_tick_time() const {
  return static_cast<double>(state_.tick_count + 1) * state_.config.tick_seconds;
}

void SessionDriver::enqueue(const Fix& fix) {
  if (!std::isfinite(fix.t) || (last_enqueued_ && fix.t <= *last_enqueued_) ||
      fix.t < std::max(state_.clock, state_.last_fix_time) - kTimeEpsilon) {
    throw Error(ErrorCode::StaleFix, "fix at t=" + std::to_string(fix.t) + " is not newer than the game clock");
  }
  if (!geo::is_valid(fix.position)) throw Error(ErrorCode::InvalidInput, "fix is not a valid WGS84 point");
  last_enqueued_ = fix.t;
  pending_.push_back(fix);
}

std::vector<GameEvent> SessionDriver::step() {
  std::vector<GameEvent> out;
  if (finished()) return out;
  const double due = next_tick_time() + kTimeEpsilon;
  while (!pending_.empty() && pending_.front().t <= due) {
    const Fix fix = pending_.front();
    pending_.pop_front();
    auto events = apply_fix(state_, fix.position, fix.t);
    out.insert(out.end(), events.begin(), events.end());
    if (finished()) return out;
  }
  auto events = tick(state_);
  out.insert(out.end(), events.begin(), events.end());
  return out;
}

}  // namespace pacmap
