#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace varkit {

enum class Errc {
  DimensionMismatch,
  CapabilityMissing,
  ProxDiverged,
  InnerSolverFailed,
  UnknownName,
  NoAnalyticForm,
  BasePointInfeasible,
  OutOfDomain,
  PointNotOnGraph,
  NotASubgradient,
  DegenerateBox,
  SpecParseError,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Library-wide exception. The code is stable and is what callers branch on;
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace varkit
