#pragma once

#include <stdexcept>
#include <string>

namespace shearstab {

enum class ErrorKind {
  Configuration,
  UnsupportedProfile,
  Input,
  Precondition,
  Numerical,
  NonConvergence,
  CriticalLayer,
  ContourCrossesSpectrum,
  Quadrature,
  EssentialSpectrum,
  Region,
  WindowTooNarrow,
  Fit,
  Resonance,
  NotUnstable,
  Domain,
};

const char* error_kind_name(ErrorKind kind);

// Configuration-class errors map to CLI exit code 2, the rest to 3.
bool is_configuration_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace shearstab
