#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flextree {

enum class ErrorCode {
    IoError,
    DuplicateSymbol,
    WrongCount,
    InvalidSymbol,
    OrderNegative,
    BadContextLength,
    FormatVersionMismatch,
    CorruptModel,
    InvalidCommandForTransition,
    BadCommandId,
    TargetNotNormalized,
    NoTarget,
    NonMonotonicTime,
    CharacterNotInCharset,
    NotEnoughText,
    CorpusTooSmall,
    ZeroDuration,
    DegenerateAlphabet,
    EmptyLog,
    MalformedTranscript,
    UnknownOrder,
    MalformedTarget,
    UnknownSession,
    BadRequest,
};

/// Stable identifier used in wire error bodies ({"error": code, ...}).
std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the engine carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace flextree
