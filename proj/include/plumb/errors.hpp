#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plumb {

/// Malformed input: bad graph text, bad vector syntax, bad CLI arguments.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Syntax error with a character offset into the parsed text.
class ParseError : public InputError {
public:
  ParseError(const std::string &what, std::size_t position)
      : InputError(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A mathematical hypothesis of the requested computation does not hold
/// (degenerate or indefinite form, too many bad vertices, ...).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The computation exceeded a configured budget (state cap, level budget).
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace plumb
