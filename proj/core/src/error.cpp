#include "spe/error.hpp"

#include <atomic>
#include <iostream>

namespace spe {

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingKey:
    case ErrorCode::InvalidValue:
    case ErrorCode::UnknownKey:
    case ErrorCode::InvalidGrid:
    case ErrorCode::RightBoundaryNotVanishing:
    case ErrorCode::NonInvertibleParametrization:
    case ErrorCode::PatchTooSmall:
    case ErrorCode::BadLength:
    case ErrorCode::NonZeroMean:
      return ErrorCategory::Config;
    case ErrorCode::IoError:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Numerical;
  }
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::RightBoundaryNotVanishing: return "RightBoundaryNotVanishing";
    case ErrorCode::NonInvertibleParametrization: return "NonInvertibleParametrization";
    case ErrorCode::PatchTooSmall: return "PatchTooSmall";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::NoRealRoot: return "NoRealRoot";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::SingularLinearization: return "SingularLinearization";
    case ErrorCode::InstabilityDetected: return "InstabilityDetected";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void raise(ErrorCode code, const std::string& detail) {
  throw Error(code, std::string(to_string(code)) + ": " + detail);
}

void rethrow_with_context(const Error& e, const std::string& context) {
  throw Error(e.code(), context + ": " + e.what());
}

namespace {

void stderr_sink(std::string_view message) {
  std::cerr << "warning: " << message << '\n';
}

std::atomic<WarningSink> g_sink{&stderr_sink};

}  // namespace

void set_warning_sink(WarningSink sink) {
  g_sink.store(sink ? sink : &stderr_sink);
}

void warn(std::string_view message) { g_sink.load()(message); }

}  // namespace spe
