#include "pacmap/error.hpp"

namespace pacmap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::OutOfProjectionRange: return "OutOfProjectionRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::EmptyGameSpace: return "EmptyGameSpace";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::DegenerateRoute: return "DegenerateRoute";
    case ErrorCode::OutsideGameSpace: return "OutsideGameSpace";
    case ErrorCode::StaleFix: return "StaleFix";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(ErrorCode::ParseError,
            message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

namespace {

std::string describe_missing(const std::vector<std::int64_t>& missing) {
  std::string out = "way references missing node ids:";
  for (auto id : missing) {
    out += ' ';
    out += std::to_string(id);
  }
  return out;
}

}  // namespace

DanglingReferenceError::DanglingReferenceError(std::vector<std::int64_t> missing)
    : Error(ErrorCode::DanglingReference, describe_missing(missing)), missing_(std::move(missing)) {}

}  // namespace pacmap
