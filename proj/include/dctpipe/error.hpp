#pragma once

#include <stdexcept>
#include <string>

namespace dctpipe {

enum class ErrorCode {
    // jpeg parsing / entropy decoding
    UnsupportedMarker,
    MalformedSegment,
    MissingTable,
    CorruptEntropyStream,
    TruncatedStream,
    RestartMarkerMismatch,
    AlreadyDequantized,
    InvalidState,
    // tensor assembly / selection
    DimensionMismatch,
    IndexOutOfRange,
    // DCTT container
    FormatVersionMismatch,
    ChecksumMismatch,
    TruncatedFile,
    // reduction operators
    ShapeMismatch,
    GroupSizeError,
    // cost model
    UnknownVariant,
    UnelaboratedSpec,
    MissingBaseline,
    BadConfig,
    // bench harness
    EmptyCorpus,
    CorpusTooSmall,
    UnwritableOutput,
    ClockResolutionTooCoarse,
};

const char* error_code_name(ErrorCode code);

/// Single exception type carrying a typed code plus a human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnsupportedMarker: return "unsupported";
        case ErrorCode::MalformedSegment: return "malformed segment";
        case ErrorCode::MissingTable: return "missing table";
        case ErrorCode::CorruptEntropyStream: return "corrupt entropy stream";
        case ErrorCode::TruncatedStream: return "truncated stream";
        case ErrorCode::RestartMarkerMismatch: return "restart marker mismatch";
        case ErrorCode::AlreadyDequantized: return "already dequantized";
        case ErrorCode::InvalidState: return "invalid state";
        case ErrorCode::DimensionMismatch: return "dimension mismatch";
        case ErrorCode::IndexOutOfRange: return "index out of range";
        case ErrorCode::FormatVersionMismatch: return "format/version mismatch";
        case ErrorCode::ChecksumMismatch: return "checksum mismatch";
        case ErrorCode::TruncatedFile: return "truncated file";
        case ErrorCode::ShapeMismatch: return "shape mismatch";
        case ErrorCode::GroupSizeError: return "group size error";
        case ErrorCode::UnknownVariant: return "unknown variant";
        case ErrorCode::UnelaboratedSpec: return "unelaborated spec";
        case ErrorCode::MissingBaseline: return "missing baseline";
        case ErrorCode::BadConfig: return "bad config";
        case ErrorCode::EmptyCorpus: return "empty corpus";
        case ErrorCode::CorpusTooSmall: return "corpus too small";
        case ErrorCode::UnwritableOutput: return "unwritable output";
        case ErrorCode::ClockResolutionTooCoarse: return "clock resolution too coarse";
    }
    return "error";
}

}  // namespace dctpipe
