#include "micromaser/error.hpp"

namespace micromaser {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::TruncationUnsafe: return "truncation_unsafe";
    case ErrorKind::DegenerateState: return "degenerate_state";
    case ErrorKind::StepSizeUnderflow: return "step_size_underflow";
    case ErrorKind::TraceDrift: return "trace_drift";
    case ErrorKind::PathologicalRejection: return "pathological_rejection";
    case ErrorKind::DegenerateBranch: return "degenerate_branch";
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace micromaser
