#include "flextree/error.hpp"

namespace flextree {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
        case ErrorCode::WrongCount: return "WrongCount";
        case ErrorCode::InvalidSymbol: return "InvalidSymbol";
        case ErrorCode::OrderNegative: return "OrderNegative";
        case ErrorCode::BadContextLength: return "BadContextLength";
        case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
        case ErrorCode::CorruptModel: return "CorruptModel";
        case ErrorCode::InvalidCommandForTransition: return "InvalidCommandForTransition";
        case ErrorCode::BadCommandId: return "BadCommandId";
        case ErrorCode::TargetNotNormalized: return "TargetNotNormalized";
        case ErrorCode::NoTarget: return "NoTarget";
        case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
        case ErrorCode::CharacterNotInCharset: return "CharacterNotInCharset";
        case ErrorCode::NotEnoughText: return "NotEnoughText";
        case ErrorCode::CorpusTooSmall: return "CorpusTooSmall";
        case ErrorCode::ZeroDuration: return "ZeroDuration";
        case ErrorCode::DegenerateAlphabet: return "DegenerateAlphabet";
        case ErrorCode::EmptyLog: return "EmptyLog";
        case ErrorCode::MalformedTranscript: return "MalformedTranscript";
        case ErrorCode::UnknownOrder: return "UnknownOrder";
        case ErrorCode::MalformedTarget: return "MalformedTarget";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::BadRequest: return "BadRequest";
    }
    return "Unknown";
}

}  // namespace flextree
