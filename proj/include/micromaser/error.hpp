#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace micromaser {

enum class ErrorKind : std::uint8_t {
  TruncationUnsafe,
  DegenerateState,
  StepSizeUnderflow,
  TraceDrift,
  PathologicalRejection,
  DegenerateBranch,
  InvalidArgument,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library. The kind is machine-readable and
// is what the CLI prints on failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace micromaser
