#pragma once

#include <stdexcept>
#include <string>

namespace selgame {

/// Input is outside the domain of an operation (atom outside universe,
/// universe mismatch, unknown point).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A search or enumeration would exceed the configured budget. Never
/// signals a wrong answer, only an instance that is too large.
class BoundExceeded : public std::runtime_error {
public:
  explicit BoundExceeded(const std::string& what_arg)
    : std::runtime_error("budget exceeded: " + what_arg) {}
};

/// A strategy table entry is missing or names an illegal move.
class LegalityError : public std::runtime_error {
public:
  LegalityError(const std::string& what_arg, std::size_t round)
    : std::runtime_error(what_arg + " (round " + std::to_string(round) + ")"),
      round_(round) {}

  std::size_t round() const noexcept { return round_; }

private:
  std::size_t round_;
};

/// Malformed JSON input; the message carries the offending field path.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace selgame
