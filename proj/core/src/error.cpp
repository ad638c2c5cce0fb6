#include "rdts/error.hpp"

namespace rdts {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::InvalidInstance: return "InvalidInstance";
        case ErrorCode::InvalidPmf: return "InvalidPmf";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnsupportedModel: return "UnsupportedModel";
        case ErrorCode::AllZeroLikelihood: return "AllZeroLikelihood";
        case ErrorCode::DegenerateInformation: return "DegenerateInformation";
        case ErrorCode::InconsistentRepresentation: return "InconsistentRepresentation";
        case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
        case ErrorCode::MarginViolated: return "MarginViolated";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::CertificateViolated: return "CertificateViolated";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::GuardExceeded: return "GuardExceeded";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace rdts
