#include <doctest.h>

#include <random>
#include <sstream>

#include "flextree/session.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace flextree;

namespace {

const CharacterSet& cs() { return default_charset(); }

const PredModel& ppm2() {
    static const PredModel m =
        train(Corpus::from_normalized("A Demand to know what happened and tell us poor benighted pea", cs()), 2, cs());
    return m;
}

Clock fixed_clock(std::int64_t t) {
    return [t] { return t; };
}

// Presses the buttons that type `c` from level 1.
void type_char(TypingSession& s, char c, std::int64_t& t) {
    for (int id = 1; id <= 10; ++id) {
        const auto* g = std::get_if<CharGroup>(&s.state().current_layout.labels[id - 1]);
        if (g && g->chars.find(c) != std::string::npos) {
            s.apply_command(CommandId(id), ++t);
            break;
        }
    }
    for (int id = 1; id <= 10; ++id) {
        const auto* k = std::get_if<SingleChar>(&s.state().current_layout.labels[id - 1]);
        if (k && k->symbol == c) {
            s.apply_command(CommandId(id), ++t);
            return;
        }
    }
    FAIL("character not reachable");
}

}  // namespace

TEST_CASE("new_session") {
    const TypingSession free(ppm2(), std::nullopt, fixed_clock(0));
    CHECK(free.state().level == Level::One);
    CHECK(free.state().text_entered.empty());
    CHECK(free.state().events.empty());
    CHECK(free.state().current_layout == level1_layout("", ppm2()));

    const TypingSession task = new_session(ppm2(), "A Demand to know what happened", fixed_clock(0));
    CHECK(task.state().target_text->size() == 30);

    CHECK_ERROR(TypingSession(ppm2(), "caf\xc3\xa9", fixed_clock(0)), ErrorCode::TargetNotNormalized);
}

TEST_CASE("apply_command examples") {
    TypingSession s(ppm2(), std::nullopt, fixed_clock(0));

    SUBCASE("1 then 1 types A") {
        const auto e1 = s.apply_command(CommandId(1), 10);
        CHECK(e1.kind == EventKind::DescendToLevel2);
        CHECK(s.state().level == Level::Two);
        CHECK(s.state().selected_group->chars == "ABCDEFGH");
        const auto e2 = s.apply_command(CommandId(1), 20);
        CHECK(e2.kind == EventKind::CharTyped);
        CHECK(e2.symbol == 'A');
        CHECK(e2.level_at_event == Level::Two);
        CHECK(s.state().text_entered == "A");
        CHECK(s.state().level == Level::One);
        CHECK_FALSE(s.state().selected_group.has_value());
    }
    SUBCASE("delete on empty text is a NoOp") {
        CHECK(s.apply_command(CommandId(6), 5).kind == EventKind::NoOp);
        CHECK(s.state().text_entered.empty());
        CHECK(s.state().level == Level::One);
    }
    SUBCASE("GO BACK returns without typing") {
        s.apply_command(CommandId(3), 1);
        const auto e = s.apply_command(CommandId(5), 2);
        CHECK(e.kind == EventKind::WentBack);
        CHECK(s.state().text_entered.empty());
        CHECK(s.state().level == Level::One);
    }
    SUBCASE("DELETE at level 2 erases and returns to level 1") {
        std::int64_t t = 0;
        type_char(s, 'A', t);
        type_char(s, ' ', t);
        s.apply_command(CommandId(2), ++t);
        const auto e = s.apply_command(CommandId(6), ++t);
        CHECK(e.kind == EventKind::Deleted);
        CHECK(e.symbol == ' ');
        CHECK(e.level_at_event == Level::Two);
        CHECK(s.state().text_entered == "A");
        CHECK(s.state().level == Level::One);
        CHECK(s.state().current_layout == level1_layout("A", ppm2()));
    }
    SUBCASE("time must not run backwards") {
        s.apply_command(CommandId(1), 100);
        CHECK_ERROR(s.apply_command(CommandId(1), 99), ErrorCode::NonMonotonicTime);
        CHECK(s.apply_command(CommandId(1), 100).kind == EventKind::CharTyped);
    }
}

TEST_CASE("injected clock stamps events relative to session start") {
    std::int64_t now = 5000;
    TypingSession s(ppm2(), std::nullopt, [&now] { return now; });
    now = 6500;
    CHECK(s.apply_command(CommandId(1)).t_ms == 1500);
    now = 9000;
    CHECK(s.apply_command(CommandId(1)).t_ms == 4000);
}

TEST_CASE("is_complete") {
    TypingSession s(ppm2(), "A Dem", fixed_clock(0));
    std::int64_t t = 0;
    CHECK_FALSE(s.is_complete());
    for (char c : std::string("A De")) type_char(s, c, t);
    CHECK_FALSE(s.is_complete());
    type_char(s, 'n', t);
    CHECK_FALSE(s.is_complete());
    s.apply_command(CommandId(6), ++t);
    type_char(s, 'm', t);
    CHECK(s.is_complete());
    type_char(s, 'x', t);
    CHECK_FALSE(s.is_complete());

    const TypingSession free(ppm2(), std::nullopt, fixed_clock(0));
    CHECK_ERROR(free.is_complete(), ErrorCode::NoTarget);
}

TEST_CASE("last_five") {
    TypingSession s(ppm2(), std::nullopt, fixed_clock(0));
    std::int64_t t = 0;
    CHECK(s.last_five().empty());
    for (char c : std::string("and t")) type_char(s, c, t);
    CHECK(s.last_five() == "and t");
    for (char c : std::string("benighted")) type_char(s, c, t);
    CHECK(s.last_five() == "ghted");
}

TEST_CASE("error-free typing costs exactly two commands per letter") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        TypingSession s(ppm2(), std::nullopt, fixed_clock(0));
        const std::string target = oracle::random_text(rng, cs().symbols(), static_cast<std::size_t>(trial));
        std::int64_t t = 0;
        for (char c : target) type_char(s, c, t);
        CHECK(s.state().text_entered == target);
        CHECK(s.state().events.size() == 2 * target.size());
    }
}

TEST_CASE("select then DELETE restores text and layout") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        TypingSession s(ppm2(), std::nullopt, fixed_clock(0));
        std::int64_t t = 0;
        for (char c : oracle::random_text(rng, "and tell us", static_cast<std::size_t>(trial % 7))) type_char(s, c, t);
        const std::string before = s.state().text_entered;
        const Layout layout_before = s.state().current_layout;
        type_char(s, cs().at(static_cast<std::size_t>(trial) % 72), t);
        s.apply_command(CommandId(6), ++t);
        CHECK(s.state().text_entered == before);
        CHECK(s.state().current_layout == layout_before);
    }
}

TEST_CASE("random command streams keep the state consistent and replay exactly") {
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> button(1, 10);
    for (int trial = 0; trial < 100; ++trial) {
        TypingSession s(ppm2(), std::nullopt, fixed_clock(0));
        for (int i = 0; i < 60; ++i) {
            s.apply_command(CommandId(button(rng)), i * 10);
            const SessionState& st = s.state();
            CHECK((st.level == Level::Two) == st.selected_group.has_value());
            CHECK(is_normalized(st.text_entered, cs()));
            const Layout expected = st.level == Level::One ? level1_layout(st.text_entered, ppm2())
                                                           : level2_layout(*st.selected_group);
            CHECK(st.current_layout == expected);
            CHECK(st.events.back().text_len == st.text_entered.size());
        }

        std::stringstream log;
        write_transcript(log, s.state().events);
        const auto parsed = read_transcript(log);
        CHECK(parsed == s.state().events);
        const TypingSession again = replay(parsed, ppm2());
        CHECK(again.state().text_entered == s.state().text_entered);
        CHECK(again.state().current_layout == s.state().current_layout);
    }
}

TEST_CASE("transcript lines") {
    TypingSession s(ppm2(), std::nullopt, fixed_clock(0));
    s.apply_command(CommandId(1), 1500);
    s.apply_command(CommandId(1), 3000);
    CHECK(to_json_line(s.state().events[0]) == R"({"t_ms":1500,"kind":"descend","cmd":1,"level":1,"text_len":0})");
    CHECK(to_json_line(s.state().events[1]) ==
          R"({"t_ms":3000,"kind":"char","char":"A","cmd":1,"level":2,"text_len":1})");

    CHECK_ERROR(event_from_json_line(R"({"t_ms":1,"kind":"jump","cmd":1,"level":1,"text_len":0})"),
                ErrorCode::MalformedTranscript);
    CHECK_ERROR(event_from_json_line(R"({"t_ms":1,"kind":"noop","cmd":12,"level":1,"text_len":0})"),
                ErrorCode::MalformedTranscript);
    CHECK_ERROR(event_from_json_line("garbage"), ErrorCode::MalformedTranscript);

    // A log that claims a different outcome than the engine produces.
    auto tampered = s.state().events;
    tampered[1].symbol = 'B';
    CHECK_ERROR(replay(tampered, ppm2()), ErrorCode::MalformedTranscript);
}
