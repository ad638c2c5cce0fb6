#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdts {

enum class ErrorCode {
    IndexOutOfRange,
    InvalidInstance,
    InvalidPmf,
    InvalidArgument,
    UnsupportedModel,
    AllZeroLikelihood,
    DegenerateInformation,
    InconsistentRepresentation,
    InvalidEpsilon,
    EpsilonTooLarge,
    MarginViolated,
    Infeasible,
    CertificateViolated,
    TooLarge,
    GuardExceeded,
    ParseError,
};

/// Stable identifier used in machine-readable error output.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string & what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace rdts
