// The rules engine: GPS fixes and clock ticks in, an ordered event log out.
#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "pacmap/game_space.hpp"
#include "pacmap/ghost_ai.hpp"
#include "pacmap/rng.hpp"

namespace pacmap {

struct SessionConfig {
  double tick_seconds = 0.2;
  Meters catch_radius = 8.0;
  Meters cookie_radius = 6.0;
  Meters poi_radius = 10.0;
  int initial_lives = 3;
  int max_lives = 5;
  double trap_duration = 15.0;
  double ghost_speed = 1.6;
  std::uint64_t seed = 0;
  double invulnerability_seconds = 3.0;
  Meters fix_tolerance = 50.0;  // fixes beyond radius + tolerance are rejected
  bool roamers_catch = true;

  void validate() const;
};

enum class Phase { Running, Won, Lost };

enum class EventKind {
  FixApplied,
  FixRejected,
  CookieCollected,
  LifeGained,
  TrapEntered,
  TrapExpired,
  Replanned,
  Caught,
  LifeLost,
  Won,
  Lost,
};

enum class ReplanReason { EdgeChange, DirectionChange, GoalReached };
enum class CatchCause { Proximity, EdgeTraversal };

std::string_view to_string(Phase phase);
std::string_view to_string(EventKind kind);
std::string_view to_string(ReplanReason reason);
std::string_view to_string(CatchCause cause);

/// One log entry. Only the fields relevant to `kind` are meaningful; the
/// serializer writes exactly those.
struct GameEvent {
  std::uint64_t seq = 0;
  double time = 0.0;
  EventKind kind = EventKind::FixApplied;

  GeoPoint position;             // FixApplied, FixRejected: the raw fix
  EdgeId edge = 0;               // FixApplied
  Meters offset = 0.0;           // FixApplied
  NodeId node = 0;               // FixApplied: heading; Replanned: goal
  Meters distance = 0.0;         // FixRejected: from centre; Caught: ghost-player; Replanned: path length
  std::int64_t subject = 0;      // CookieCollected: cookie id; LifeGained, TrapEntered: poi id
  int ghost = -1;                // Replanned, Caught
  ReplanReason reason = ReplanReason::EdgeChange;
  CatchCause cause = CatchCause::Proximity;
  std::vector<NodeId> path;      // Replanned
  int lives = 0;                 // LifeGained, LifeLost, Won, Lost
  int score = 0;                 // CookieCollected, Won, Lost
  bool capped = false;           // LifeGained at max lives
  double until = 0.0;            // TrapEntered
};

struct SessionState {
  GameSpace space;
  SessionConfig config;
  PlayerState player;
  std::vector<Ghost> ghosts;  // [0] red chaser, then purple, orange, blue roamers
  double clock = 0.0;
  std::uint64_t tick_count = 0;
  Rng rng;
  std::vector<GameEvent> events;
  Phase phase = Phase::Running;
  double invulnerable_until = 0.0;
  double last_fix_time = 0.0;
  std::set<NodeId> traps_inside;

  std::size_t cookies_remaining() const;
};

/// Throws Error(OutsideGameSpace) when the start lies outside the circle.
SessionState create_session(GameSpace space, const SessionConfig& config, GeoPoint player_start);

/// Returns the events emitted by this fix (also appended to state.events).
/// Throws Error(StaleFix) when time precedes the clock or the previous fix.
std::vector<GameEvent> apply_fix(SessionState& state, GeoPoint fix, double time);

/// Advances the clock by config.tick_seconds. No-op once the game is over.
std::vector<GameEvent> tick(SessionState& state);

/// Node ids ordered by shortest-path distance from `from`, farthest first
/// (ties: smaller id). Ghost spawn slots are taken from the front.
std::vector<NodeId> farthest_nodes(const RoadGraph& graph, NodeId from);

struct Fix {
  double t = 0.0;
  GeoPoint position;
};

/// Owns a session and a queue of timestamped fixes, interleaving them with
/// ticks the same way for the headless harness and the network server: every
/// queued fix with t <= the next tick time is applied before that tick.
class SessionDriver {
 public:
  SessionDriver(GameSpace space, const SessionConfig& config, GeoPoint player_start);

  /// Throws Error(StaleFix) unless t is after the previous queued fix and not
  /// before the clock; Error(InvalidInput) for a malformed position.
  void enqueue(const Fix& fix);

  /// Applies due fixes then one tick; returns every event produced.
  std::vector<GameEvent> step();

  double next_tick_time() const;
  bool finished() const { return state_.phase != Phase::Running; }
  const SessionState& state() const { return state_; }
  std::size_t pending() const { return pending_.size(); }

 private:
  SessionState state_;
  std::deque<Fix> pending_;
  std::optional<double> last_enqueued_;
};

/// Time comparisons between fixes and ticks allow this much slack.
inline constexpr double kTimeEpsilon = 1e-9;

}  // namespace pacmap
