#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flextree/layout.hpp"
#include "flextree/ppm_model.hpp"

namespace flextree {

/// Milliseconds on an arbitrary monotonic timeline.
using Clock = std::function<std::int64_t()>;

Clock steady_clock_ms();

enum class EventKind : std::uint8_t { DescendToLevel2, CharTyped, Deleted, WentBack, NoOp };

std::string_view to_string(EventKind kind) noexcept;

struct SessionEvent {
    std::int64_t t_ms;  // since session start, nondecreasing
    EventKind kind;
    std::optional<char> symbol;  // typed or erased character
    CommandId command;
    Level level_at_event;
    std::size_t text_len;  // length of text_entered after the event

    friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

struct SessionState {
    std::string text_entered;
    Level level = Level::One;
    Layout current_layout;
    std::optional<CharGroup> selected_group;  // set exactly while at level 2
    std::optional<std::string> target_text;
    std::int64_t started_at_ms = 0;
    std::int64_t last_event_at_ms = 0;
    std::vector<SessionEvent> events;
};

/// The two-level typing state machine. Single writer; the model must
/// outlive the session.
class TypingSession {
public:
    /// Throws Error{TargetNotNormalized} when the target leaves the charset.
    TypingSession(const PredModel& model, std::optional<std::string> target, Clock clock = steady_clock_ms());

    const SessionState& state() const noexcept { return state_; }
    const PredModel& model() const noexcept { return *model_; }

    /// Level 1: DELETE erases, any other button descends into its group.
    /// Level 2: GO BACK returns, DELETE erases and returns, other buttons type
    /// their character and return. DELETE on empty text is a NoOp.
    /// `t_ms` is relative to session start; Error{NonMonotonicTime} if it
    /// precedes the previous event.
    SessionEvent apply_command(CommandId command, std::int64_t t_ms);

    /// Same, stamped from the injected clock.
    SessionEvent apply_command(CommandId command);

    /// Throws Error{NoTarget} in free-typing mode.
    bool is_complete() const;

    std::string last_five() const;

private:
    const PredModel* model_;
    Clock clock_;
    SessionState state_;
};

inline TypingSession new_session(const PredModel& model, std::optional<std::string> target,
                                 Clock clock = steady_clock_ms()) {
    return TypingSession(model, std::move(target), std::move(clock));
}

/// Transcript lines:
/// {"t_ms":..,"kind":"descend|char|delete|goback|noop","char":"x","cmd":..,"level":..,"text_len":..}
std::string to_json_line(const SessionEvent& event);
SessionEvent event_from_json_line(std::string_view line);

void write_transcript(std::ostream& out, std::span<const SessionEvent> events);
std::vector<SessionEvent> read_transcript(std::istream& in);

/// Re-applies the logged commands to a fresh session. Each reproduced event
/// must match the log, else Error{MalformedTranscript}.
TypingSession replay(std::span<const SessionEvent> events, const PredModel& model,
                     std::optional<std::string> target = std::nullopt);

}  // namespace flextree
