#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eosnu {

// Malformed or inconsistent input (unknown ids, invalid nets, bad files).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An operation was called outside its contract, e.g. firing a disabled mode.
struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

struct ParseError : InputError {
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : InputError("line " + std::to_string(line) + ", col " +
                   std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}

  std::size_t line;
  std::size_t column;
};

// Exploration hit an explicit resource cap. Never a silent truncation.
struct ResourceCapExceeded : std::runtime_error {
  ResourceCapExceeded(std::string cap_name, std::size_t limit)
      : std::runtime_error("resource cap exceeded: " + cap_name + " = " +
                           std::to_string(limit)),
        cap(std::move(cap_name)),
        limit(limit) {}

  std::string cap;
  std::size_t limit;
};

}  // namespace eosnu
