#include "mmo/error.hpp"

namespace mmo {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NotPsd: return "NotPSD";
    case Errc::NotPd: return "NotPD";
    case Errc::Singular: return "Singular";
    case Errc::SingularK: return "SingularK";
    case Errc::SingularSum: return "SingularSum";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ExactModeUnavailable: return "ExactModeUnavailable";
    case Errc::AllGainsZero: return "AllGainsZero";
    case Errc::WeightOrderViolation: return "WeightOrderViolation";
    case Errc::InfeasibleTarget: return "InfeasibleTarget";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::UnknownObjective: return "UnknownObjective";
    case Errc::NotSupported: return "NotSupported";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace mmo
