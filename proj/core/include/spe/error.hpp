#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spe {

enum class ErrorCode {
  // configuration / input data
  MissingKey,
  InvalidValue,
  UnknownKey,
  InvalidGrid,
  RightBoundaryNotVanishing,
  NonInvertibleParametrization,
  PatchTooSmall,
  BadLength,
  NonZeroMean,
  // numerical failures
  NoRealRoot,
  NewtonDiverged,
  SingularLinearization,
  InstabilityDetected,
  LengthMismatch,
  ShapeMismatch,
  // output
  IoError,
};

enum class ErrorCategory { Config, Numerical, Io };

ErrorCategory category_of(ErrorCode code);
std::string_view to_string(ErrorCode code);

// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& detail);

// Re-throws `e` with `context` prepended to the message, preserving the code.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context);

// Warning sink for non-fatal conditions (defaults to stderr).
using WarningSink = void (*)(std::string_view);
void set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace spe
