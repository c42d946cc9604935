#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctrlrob {

/// A requested enumeration exceeds its combinatorial budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Wraps a failure inside an experiment pipeline with the stage that raised it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// No edge rectification move is legal from the current graph.
class RectificationStalled : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctrlrob
