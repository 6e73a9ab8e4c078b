#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace plumb {

/// Exact rational degree. boost::rational keeps it reduced with a positive
/// denominator, so equality and ordering are exact.
using Grade = boost::rational<std::int64_t>;

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Grade &g) {
  std::string s = std::to_string(g.numerator());
  if (g.denominator() != 1)
    s += "/" + std::to_string(g.denominator());
  return s;
}

/// Parses "p" or "p/q".
inline Grade parse_grade(const std::string &text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos)
      return Grade(std::stoll(text));
    return Grade(std::stoll(text.substr(0, slash)),
                 std::stoll(text.substr(slash + 1)));
  } catch (const std::exception &) {
    throw std::invalid_argument("not a rational number: " + text);
  }
}

/// True when a - b is an even integer.
inline bool same_parity_class(const Grade &a, const Grade &b) {
  Grade diff = a - b;
  return diff.denominator() == 1 && diff.numerator() % 2 == 0;
}

} // namespace plumb
