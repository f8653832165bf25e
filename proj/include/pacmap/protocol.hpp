// Message-level protocol, independent of the transport. The server is a thin
// shell around these functions, which keeps them unit-testable.
#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "pacmap/error.hpp"
#include "pacmap/game_space.hpp"
#include "pacmap/session.hpp"

namespace pacmap {

struct CreateGameRequest {
  GeoPoint center;
  GameSpaceConfig space;
  SessionConfig session;
};

/// Body of POST /games:
///   {"center": {"lat": .., "lon": ..}, "config": {"radius": .., "seed": .., ...}}
/// Throws Error(InvalidInput) for malformed JSON, unknown config keys or
/// invalid values.
CreateGameRequest parse_create_game(std::string_view body);

/// HTTP status for an engine error raised while creating a game.
int http_status_for(ErrorCode code);

/// {"v":1,"type":"fix","t":..,"lat":..,"lon":..}. Throws Error(InvalidInput).
Fix parse_client_message(std::string_view text);

std::string snapshot_message(const SessionState& state);
std::string end_message(const SessionState& state);
std::string error_message(ErrorCode code, std::string_view detail);
/// Response body of POST /games.
nlohmann::json created_game_json(const std::string& id, const SessionState& state);

}  // namespace pacmap
