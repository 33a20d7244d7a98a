#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmo {

enum class Errc {
  NonHermitian,
  NonFinite,
  NotPsd,
  NotPd,
  Singular,
  SingularK,
  SingularSum,
  DimensionMismatch,
  ExactModeUnavailable,
  AllGainsZero,
  WeightOrderViolation,
  InfeasibleTarget,
  TooLarge,
  NotApplicable,
  UnknownObjective,
  NotSupported,
  ConfigError,
  IoError,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mmo
