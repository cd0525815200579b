#include "golm/error.hpp"

namespace golm {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::InvalidCoordinate: return "InvalidCoordinate";
        case Errc::OccupiedPoint: return "OccupiedPoint";
        case Errc::SuicideMove: return "SuicideMove";
        case Errc::KoViolation: return "KoViolation";
        case Errc::SuperkoViolation: return "SuperkoViolation";
        case Errc::MalformedToken: return "MalformedToken";
        case Errc::IndexGap: return "IndexGap";
        case Errc::ColorOrderViolation: return "ColorOrderViolation";
        case Errc::SgfSyntaxError: return "SgfSyntaxError";
        case Errc::UnsupportedBoardSize: return "UnsupportedBoardSize";
        case Errc::UnsupportedFeature: return "UnsupportedFeature";
        case Errc::IllegalMoveInRecord: return "IllegalMoveInRecord";
        case Errc::IoError: return "IoError";
        case Errc::SchemaError: return "SchemaError";
        case Errc::EngineCrashed: return "EngineCrashed";
        case Errc::Timeout: return "Timeout";
        case Errc::ProtocolError: return "ProtocolError";
        case Errc::GtpFailure: return "GtpFailure";
        case Errc::IllegalPositionRejected: return "IllegalPositionRejected";
        case Errc::InsufficientCandidates: return "InsufficientCandidates";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::RejectedEmptyComment: return "RejectedEmptyComment";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::NonFiniteInput: return "NonFiniteInput";
        case Errc::UnknownSampleId: return "UnknownSampleId";
        case Errc::InsufficientPositions: return "InsufficientPositions";
        case Errc::DegenerateVariance: return "DegenerateVariance";
        case Errc::EngineUnavailable: return "EngineUnavailable";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_engine_error(Errc code) {
    switch (code) {
        case Errc::EngineCrashed:
        case Errc::Timeout:
        case Errc::ProtocolError:
        case Errc::GtpFailure:
        case Errc::IllegalPositionRejected:
        case Errc::EngineUnavailable:
            return true;
        default:
            return false;
    }
}

Error::Error(Errc code, const std::string& message, std::optional<std::size_t> index, std::string detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      index_(index),
      detail_(std::move(detail)) {}

}  // namespace golm
