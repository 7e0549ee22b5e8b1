#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cxmetric {

enum class ErrorKind {
  GradientVanishes,
  NotOnBoundary,
  OutsideDomain,
  ZeroProjection,
  CenterOutside,
  RayUnbounded,
  TypeExceedsCap,
  FrameMisaligned,
  NegativeLevi,
  NormalizationUnstable,
  OutsideDisc,
  NotAdmissible,
  PreconditionFailed,
  DegenerateFit,
  ConfigInvalid,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GradientVanishes: return "GradientVanishes";
    case ErrorKind::NotOnBoundary: return "NotOnBoundary";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::ZeroProjection: return "ZeroProjection";
    case ErrorKind::CenterOutside: return "CenterOutside";
    case ErrorKind::RayUnbounded: return "RayUnbounded";
    case ErrorKind::TypeExceedsCap: return "TypeExceedsCap";
    case ErrorKind::FrameMisaligned: return "FrameMisaligned";
    case ErrorKind::NegativeLevi: return "NegativeLevi";
    case ErrorKind::NormalizationUnstable: return "NormalizationUnstable";
    case ErrorKind::OutsideDisc: return "OutsideDisc";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cxmetric
