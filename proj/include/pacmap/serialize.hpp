// Wire and file formats: event JSON-lines, stage JSON, live snapshots.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pacmap/game_space.hpp"
#include "pacmap/session.hpp"

namespace pacmap {

/// Protocol/schema version carried by every message and log line.
inline constexpr int kProtocolVersion = 1;

/// Fixed-point decimal text, e.g. fixed(1.5, 3) == "1.500". Negative zero is
/// written without the sign.
std::string fixed(double value, int decimals);

/// One JSON object per event with a stable field order. Coordinates use 7
/// decimals, metres and seconds 3. The same bytes are sent as the `event`
/// message on the play channel.
std::string to_json_line(const GameEvent& event);

/// Concatenated lines, each terminated by '\n'.
std::string to_json_lines(const std::vector<GameEvent>& events);

/// Stage snapshot: centre, config, nodes, edges with polylines, cookies and
/// POIs. Coordinates are written at full double precision so a stage
/// round-trips exactly.
nlohmann::json stage_to_json(const GameSpace& space);

/// Rebuilds a GameSpace from stage_to_json output (edge lengths are
/// recomputed from the geometry). Throws Error(InvalidInput) on schema errors.
GameSpace stage_from_json(const nlohmann::json& doc);

/// Everything needed to render the current state: player, ghosts, remaining
/// cookies, active POIs, lives, score, trap state, clock and phase.
nlohmann::json snapshot_to_json(const SessionState& state);

}  // namespace pacmap
