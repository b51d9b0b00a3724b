#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace onreg {

/// Argument outside the mathematical domain of an operation (bad label index,
/// instance outside the unit ball, q <= d for the width potential, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of a construction was violated by the caller
/// (empty child version space, incompatible McShane anchors, ...).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Observed data admits no hypothesis in the class, e.g. the Lipschitz
/// envelopes crossed.
class NonRealizableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The environment broke the game protocol in round `round` (1-based).
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::size_t round, const std::string& what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}

  std::size_t round() const noexcept { return round_; }

 private:
  std::size_t round_;
};

/// An exhaustive computation ran out of its budget. `best_so_far` is the best
/// certified value found before stopping.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, double best_so_far)
      : std::runtime_error(what), best_so_far_(best_so_far) {}

  double best_so_far() const noexcept { return best_so_far_; }

 private:
  double best_so_far_;
};

/// Invalid experiment configuration; `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace onreg
