#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace golm {

enum class Errc {
    InvalidCoordinate,
    OccupiedPoint,
    SuicideMove,
    KoViolation,
    SuperkoViolation,
    MalformedToken,
    IndexGap,
    ColorOrderViolation,
    SgfSyntaxError,
    UnsupportedBoardSize,
    UnsupportedFeature,
    IllegalMoveInRecord,
    IoError,
    SchemaError,
    EngineCrashed,
    Timeout,
    ProtocolError,
    GtpFailure,
    IllegalPositionRejected,
    InsufficientCandidates,
    IndexOutOfRange,
    RejectedEmptyComment,
    LengthMismatch,
    NonFiniteInput,
    UnknownSampleId,
    InsufficientPositions,
    DegenerateVariance,
    EngineUnavailable,
    InvalidArgument,
};

const char* errc_name(Errc code);

// Engine-side failures map to exit code 2 in the CLI, everything else to 1.
bool is_engine_error(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::optional<std::size_t> index = std::nullopt,
          std::string detail = {});

    Errc code() const noexcept { return code_; }
    // 1-based move index or line number, depending on the raising operation.
    std::optional<std::size_t> index() const noexcept { return index_; }
    // Raw offending input (protocol line, token) when available.
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::optional<std::size_t> index_;
    std::string detail_;
};

}  // namespace golm
