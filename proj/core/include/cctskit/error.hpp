#pragma once

#include <stdexcept>
#include <string>

namespace cctskit {

/// Input outside an operation's mathematical domain (negative tonnage, fraction > 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grids combined in one operation do not share ncols/nrows/cellsize/origin.
class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values (nonpositive weights, unsorted tables, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message always carries "<file>:<line>: ".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// A pipeline stage was asked to run before its upstream artifact exists.
class DependencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optimization problem has no feasible solution. `binding` names the limiting
/// aggregate ("capture", "injectivity", "network", ...); `period` is -1 for
/// single-period problems.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string binding, const std::string& what, int period = -1)
      : std::runtime_error(what), binding_(std::move(binding)), period_(period) {}

  const std::string& binding() const noexcept { return binding_; }
  int period() const noexcept { return period_; }

 private:
  std::string binding_;
  int period_;
};

}  // namespace cctskit
