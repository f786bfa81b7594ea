#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maintviz {

enum class ErrorKind {
  NotARepository,
  EmptyRepository,
  IoFailure,
  MalformedRecord,
  SchemaMismatch,
  DuplicateKey,
  InvalidLabel,
  UnknownProject,
  InvalidThreshold,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the core library. The kind is what callers
/// branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace maintviz
