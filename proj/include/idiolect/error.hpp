#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idiolect {

enum class ErrorKind {
  // configuration
  Config,
  PreconditionFailed,
  // corpus / parsing
  Io,
  MalformedInput,
  InvalidEncoding,
  EmptyDocument,
  UnbalancedBoilerplateMarkers,
  NoTurnsFound,
  NoEligibleCharacters,
  InsufficientText,
  // statistics
  EmptyDistribution,
  ModeMismatch,
  DegenerateCategory,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code for the CLI: 2 config, 3 corpus/parse, 4 degenerate statistics.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Pipeline stage that raised the error, empty when raised outside run_experiment.
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const {
    Error e(*this);
    e.stage_ = std::move(stage);
    return e;
  }

 private:
  ErrorKind kind_;
  std::string stage_;
};

}  // namespace idiolect
