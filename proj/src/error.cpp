#include "idiolect/error.hpp"

namespace idiolect {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::InvalidEncoding: return "InvalidEncoding";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::UnbalancedBoilerplateMarkers: return "UnbalancedBoilerplateMarkers";
    case ErrorKind::NoTurnsFound: return "NoTurnsFound";
    case ErrorKind::NoEligibleCharacters: return "NoEligibleCharacters";
    case ErrorKind::InsufficientText: return "InsufficientText";
    case ErrorKind::EmptyDistribution: return "EmptyDistribution";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::DegenerateCategory: return "DegenerateCategory";
  }
  return "UnknownError";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::PreconditionFailed:
      return 2;
    case ErrorKind::Io:
    case ErrorKind::MalformedInput:
    case ErrorKind::InvalidEncoding:
    case ErrorKind::EmptyDocument:
    case ErrorKind::UnbalancedBoilerplateMarkers:
    case ErrorKind::NoTurnsFound:
    case ErrorKind::NoEligibleCharacters:
    case ErrorKind::InsufficientText:
      return 3;
    case ErrorKind::EmptyDistribution:
    case ErrorKind::ModeMismatch:
    case ErrorKind::DegenerateCategory:
      return 4;
  }
  return 1;
}

}  // namespace idiolect
