#include "shearstab/errors.hpp"

namespace shearstab {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Configuration: return "configuration error";
    case ErrorKind::UnsupportedProfile: return "unsupported profile";
    case ErrorKind::Input: return "input error";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::Numerical: return "numerical error";
    case ErrorKind::NonConvergence: return "nonconvergence";
    case ErrorKind::CriticalLayer: return "critical-layer singularity";
    case ErrorKind::ContourCrossesSpectrum: return "contour crosses spectrum";
    case ErrorKind::Quadrature: return "quadrature error";
    case ErrorKind::EssentialSpectrum: return "spectral parameter in essential spectrum";
    case ErrorKind::Region: return "region error";
    case ErrorKind::WindowTooNarrow: return "window too narrow";
    case ErrorKind::Fit: return "fit error";
    case ErrorKind::Resonance: return "resonance";
    case ErrorKind::NotUnstable: return "profile not unstable";
    case ErrorKind::Domain: return "domain error";
  }
  return "error";
}

bool is_configuration_error(ErrorKind kind) {
  return kind == ErrorKind::Configuration || kind == ErrorKind::UnsupportedProfile ||
         kind == ErrorKind::Input || kind == ErrorKind::Precondition;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace shearstab
