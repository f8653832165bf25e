#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pacmap {

enum class ErrorCode {
  InvalidInput,
  NonConvergence,
  OutOfProjectionRange,
  ParseError,
  DanglingReference,
  EmptyGraph,
  EmptyGameSpace,
  UnknownNode,
  NoPath,
  DegenerateRoute,
  OutsideGameSpace,
  StaleFix,
};

std::string_view to_string(ErrorCode code);

/// Base exception for everything the engine reports. The code is what callers
/// (the HTTP layer in particular) branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DanglingReferenceError : public Error {
 public:
  explicit DanglingReferenceError(std::vector<std::int64_t> missing);

  const std::vector<std::int64_t>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::int64_t> missing_;
};

}  // namespace pacmap
