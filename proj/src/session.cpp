#include "flextree/session.hpp"

#include <chrono>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "flextree/error.hpp"

namespace flextree {

Clock steady_clock_ms() {
    return [] {
        using namespace std::chrono;
        return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
    };
}

std::string_view to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::DescendToLevel2: return "descend";
        case EventKind::CharTyped: return "char";
        case EventKind::Deleted: return "delete";
        case EventKind::WentBack: return "goback";
        case EventKind::NoOp: return "noop";
    }
    return "noop";
}

TypingSession::TypingSession(const PredModel& model, std::optional<std::string> target, Clock clock)
    : model_(&model), clock_(std::move(clock)) {
    if (target && !is_normalized(*target, model.charset())) {
        throw Error(ErrorCode::TargetNotNormalized, "target sentence contains characters outside the charset");
    }
    state_.target_text = std::move(target);
    state_.current_layout = level1_layout("", model);
    state_.started_at_ms = clock_ ? clock_() : 0;
    state_.last_event_at_ms = 0;
}

SessionEvent TypingSession::apply_command(CommandId command, std::int64_t t_ms) {
    if (t_ms < 0 || (!state_.events.empty() && t_ms < state_.last_event_at_ms)) {
        throw Error(ErrorCode::NonMonotonicTime, "event time " + std::to_string(t_ms) +
                                                     " ms precedes the previous event");
    }
    const Level level_at_event = state_.level;
    EventKind kind;
    std::optional<char> symbol;

    if (command.is_delete()) {
        state_.current_layout = next_layout(Level::One, command, state_, *model_);
        if (state_.text_entered.empty()) {
            kind = EventKind::NoOp;
        } else {
            kind = EventKind::Deleted;
            symbol = state_.text_entered.back();
            state_.text_entered.pop_back();
        }
        state_.level = Level::One;
        state_.selected_group.reset();
    } else if (state_.level == Level::One) {
        const Layout next = next_layout(Level::Two, command, state_, *model_);
        state_.selected_group = std::get<CharGroup>(state_.current_layout.at(command));
        state_.current_layout = next;
        state_.level = Level::Two;
        kind = EventKind::DescendToLevel2;
    } else {
        const Layout next = next_layout(Level::One, command, state_, *model_);
        if (command.is_go_back()) {
            kind = EventKind::WentBack;
        } else {
            kind = EventKind::CharTyped;
            symbol = std::get<SingleChar>(state_.current_layout.at(command)).symbol;
            state_.text_entered.push_back(*symbol);
        }
        state_.current_layout = next;
        state_.level = Level::One;
        state_.selected_group.reset();
    }

    state_.last_event_at_ms = t_ms;
    SessionEvent event{t_ms, kind, symbol, command, level_at_event, state_.text_entered.size()};
    state_.events.push_back(event);
    return event;
}

SessionEvent TypingSession::apply_command(CommandId command) {
    const std::int64_t now = clock_ ? clock_() - state_.started_at_ms : state_.last_event_at_ms;
    return apply_command(command, std::max(now, state_.last_event_at_ms));
}

bool TypingSession::is_complete() const {
    if (!state_.target_text) throw Error(ErrorCode::NoTarget, "session has no target sentence");
    return state_.text_entered == *state_.target_text;
}

std::string TypingSession::last_five() const {
    const std::string& t = state_.text_entered;
    return t.size() <= 5 ? t : t.substr(t.size() - 5);
}

std::string to_json_line(const SessionEvent& event) {
    nlohmann::ordered_json j;
    j["t_ms"] = event.t_ms;
    j["kind"] = to_string(event.kind);
    if (event.symbol) j["char"] = std::string(1, *event.symbol);
    j["cmd"] = event.command.value();
    j["level"] = static_cast<int>(event.level_at_event);
    j["text_len"] = event.text_len;
    return j.dump();
}

SessionEvent event_from_json_line(std::string_view line) {
    auto malformed = [&](const std::string& why) {
        return Error(ErrorCode::MalformedTranscript, "bad transcript line: " + why);
    };
    try {
        const auto j = nlohmann::json::parse(line);
        const auto kind_name = j.at("kind").get<std::string>();
        EventKind kind;
        if (kind_name == "descend") kind = EventKind::DescendToLevel2;
        else if (kind_name == "char") kind = EventKind::CharTyped;
        else if (kind_name == "delete") kind = EventKind::Deleted;
        else if (kind_name == "goback") kind = EventKind::WentBack;
        else if (kind_name == "noop") kind = EventKind::NoOp;
        else throw malformed("unknown kind '" + kind_name + "'");

        std::optional<char> symbol;
        if (const auto it = j.find("char"); it != j.end()) {
            const auto s = it->get<std::string>();
            if (s.size() != 1) throw malformed("char must be one character");
            symbol = s[0];
        }
        const int level = j.at("level").get<int>();
        if (level != 1 && level != 2) throw malformed("level must be 1 or 2");
        return SessionEvent{j.at("t_ms").get<std::int64_t>(), kind, symbol,
                            CommandId(j.at("cmd").get<int>()), static_cast<Level>(level),
                            j.at("text_len").get<std::size_t>()};
    } catch (const nlohmann::json::exception& e) {
        throw malformed(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MalformedTranscript) throw;
        throw malformed(e.what());
    }
}

void write_transcript(std::ostream& out, std::span<const SessionEvent> events) {
    for (const SessionEvent& e : events) out << to_json_line(e) << '\n';
}

std::vector<SessionEvent> read_transcript(std::istream& in) {
    std::vector<SessionEvent> events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        events.push_back(event_from_json_line(line));
    }
    return events;
}

TypingSession replay(std::span<const SessionEvent> events, const PredModel& model,
                     std::optional<std::string> target) {
    TypingSession session(model, std::move(target), Clock{});
    for (const SessionEvent& logged : events) {
        const SessionEvent again = session.apply_command(logged.command, logged.t_ms);
        if (again != logged) {
            throw Error(ErrorCode::MalformedTranscript,
                        "replay diverged at t_ms=" + std::to_string(logged.t_ms) + " (logged " +
                            std::string(to_string(logged.kind)) + ", got " + std::string(to_string(again.kind)) +
                            ")");
        }
    }
    return session;
}

}  // namespace flextree
