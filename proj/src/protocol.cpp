#include "pacmap/protocol.hpp"

#include <cmath>

#include "pacmap/serialize.hpp"

namespace pacmap {

using json = nlohmann::json;

namespace {

double number_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw Error(ErrorCode::InvalidInput, std::string("missing or non-numeric field '") + key + "'");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, std::string("non-finite '") + key + "'");
  return v;
}

json parse_object(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::InvalidInput, "body is not valid JSON");
  if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, "expected a JSON object");
  return doc;
}

void apply_override(CreateGameRequest& req, const std::string& key, const json& value) {
  if (key == "roamers_catch") {
    if (!value.is_boolean()) throw Error(ErrorCode::InvalidInput, "roamers_catch must be a boolean");
    req.session.roamers_catch = value.get<bool>();
    return;
  }
  if (!value.is_number()) throw Error(ErrorCode::InvalidInput, "config '" + key + "' must be a number");
  const double v = value.get<double>();
  if (key == "seed") {
    if (!value.is_number_unsigned()) throw Error(ErrorCode::InvalidInput, "seed must be a non-negative integer");
    req.session.seed = value.get<std::uint64_t>();
  } else if (key == "initial_lives" || key == "max_lives") {
    if (!value.is_number_integer()) throw Error(ErrorCode::InvalidInput, key + " must be an integer");
    (key == "initial_lives" ? req.session.initial_lives : req.session.max_lives) = value.get<int>();
  } else if (key == "radius") {
    req.space.radius = v;
  } else if (key == "cookie_spacing") {
    req.space.cookie_spacing = v;
  } else if (key == "min_edge_cookie_margin") {
    req.space.min_edge_cookie_margin = v;
  } else if (key == "tick_seconds") {
    req.session.tick_seconds = v;
  } else if (key == "catch_radius") {
    req.session.catch_radius = v;
  } else if (key == "cookie_radius") {
    req.session.cookie_radius = v;
  } else if (key == "poi_radius") {
    req.session.poi_radius = v;
  } else if (key == "trap_duration") {
    req.session.trap_duration = v;
  } else if (key == "ghost_speed") {
    req.session.ghost_speed = v;
  } else if (key == "invulnerability_seconds") {
    req.session.invulnerability_seconds = v;
  } else if (key == "fix_tolerance") {
    req.session.fix_tolerance = v;
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown config key '" + key + "'");
  }
}

}  // namespace

CreateGameRequest parse_create_game(std::string_view body) {
  const json doc = parse_object(body);
  for (const auto& [key, _] : doc.items()) {
    if (key != "center" && key != "config" && key != "v") {
      throw Error(ErrorCode::InvalidInput, "unknown field '" + key + "'");
    }
  }
  const auto center = doc.find("center");
  if (center == doc.end() || !center->is_object()) throw Error(ErrorCode::InvalidInput, "missing 'center' object");
  CreateGameRequest req;
  req.center = geo::make_point(number_field(*center, "lat"), number_field(*center, "lon"));
  if (const auto config = doc.find("config"); config != doc.end()) {
    if (!config->is_object()) throw Error(ErrorCode::InvalidInput, "'config' must be an object");
    for (const auto& [key, value] : config->items()) apply_override(req, key, value);
  }
  req.space.validate();
  req.session.validate();
  return req;
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyGameSpace:
    case ErrorCode::EmptyGraph:
    case ErrorCode::OutsideGameSpace:
      return 422;
    case ErrorCode::InvalidInput:
    case ErrorCode::ParseError:
      return 400;
    default:
      return 500;
  }
}

Fix parse_client_message(std::string_view text) {
  const json doc = parse_object(text);
  const auto type = doc.find("type");
  if (type == doc.end() || !type->is_string()) throw Error(ErrorCode::InvalidInput, "missing message type");
  if (type->get<std::string>() != "fix") {
    throw Error(ErrorCode::InvalidInput, "unknown message type '" + type->get<std::string>() + "'");
  }
  if (const auto v = doc.find("v"); v != doc.end() && *v != kProtocolVersion) {
    throw Error(ErrorCode::InvalidInput, "unsupported protocol version");
  }
  Fix fix;
  fix.t = number_field(doc, "t");
  if (fix.t < 0.0) throw Error(ErrorCode::InvalidInput, "fix time must be >= 0");
  fix.position = geo::make_point(number_field(doc, "lat"), number_field(doc, "lon"));
  return fix;
}

std::string snapshot_message(const SessionState& state) {
  json msg = snapshot_to_json(state);
  msg["v"] = kProtocolVersion;
  msg["type"] = "snapshot";
  return msg.dump();
}

std::string end_message(const SessionState& state) {
  return json{{"v", kProtocolVersion},
              {"type", "end"},
              {"phase", to_string(state.phase)},
              {"score", state.player.score},
              {"lives", state.player.lives},
              {"clock", state.clock}}
      .dump();
}

std::string error_message(ErrorCode code, std::string_view detail) {
  return json{{"v", kProtocolVersion}, {"type", "error"}, {"code", to_string(code)}, {"message", detail}}.dump();
}

json created_game_json(const std::string& id, const SessionState& state) {
  json snapshot = snapshot_to_json(state);
  snapshot["v"] = kProtocolVersion;
  snapshot["type"] = "snapshot";
  return {{"v", kProtocolVersion}, {"id", id}, {"stage", stage_to_json(state.space)}, {"snapshot", snapshot}};
}

}  // namespace pacmap
