#ifndef CPSAGREE_ERROR_HPP
#define CPSAGREE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpsagree {

enum class Errc {
  InvalidArgument,
  NotCovering,
  NotMember,
  StructureError,
  SpaceMismatch,
  TooLarge,
  NotOneClosed,
  InvalidCps,
  InternalOrderError,
  InternalError,
  VerifyFailed,
  ConfigError,
  ParseError,
  ReferenceError,
  DuplicateError,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotCovering: return "NotCovering";
    case Errc::NotMember: return "NotMember";
    case Errc::StructureError: return "StructureError";
    case Errc::SpaceMismatch: return "SpaceMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotOneClosed: return "NotOneClosed";
    case Errc::InvalidCps: return "InvalidCPS";
    case Errc::InternalOrderError: return "InternalOrderError";
    case Errc::InternalError: return "InternalError";
    case Errc::VerifyFailed: return "VerifyFailed";
    case Errc::ConfigError: return "ConfigError";
    case Errc::ParseError: return "ParseError";
    case Errc::ReferenceError: return "ReferenceError";
    case Errc::DuplicateError: return "DuplicateError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cpsagree

#endif  // CPSAGREE_ERROR_HPP
