#pragma once

#include <stdexcept>
#include <string>

namespace rmlab {

// Error taxonomy mirrors the CLI exit codes: config/usage -> 1, parse -> 2,
// protocol violation -> 3, lemma-check failure -> 4.

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// An adversary strategy broke the oracle-session rules (overspend, un-erase, ...).
class ProtocolViolation : public std::runtime_error {
 public:
  explicit ProtocolViolation(const std::string& what) : std::runtime_error(what) {}
};

// A universally-quantified inequality failed. This always indicates an
// implementation bug, never bad input.
class LemmaViolation : public std::logic_error {
 public:
  explicit LemmaViolation(const std::string& what) : std::logic_error(what) {}
};

class IntegrityError : public std::logic_error {
 public:
  explicit IntegrityError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace rmlab
