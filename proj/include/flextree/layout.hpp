#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "flextree/ppm_model.hpp"

namespace flextree {

inline constexpr int kCommandCount = 10;
inline constexpr int kGroupSize = 8;
inline constexpr int kGroupCount = 9;
inline constexpr int kDeleteCommand = 6;
inline constexpr int kGoBackCommand = 5;

enum class Level : std::uint8_t { One = 1, Two = 2 };

/// A button id, 1..10. Construction outside that range throws
/// Error{BadCommandId}.
class CommandId {
public:
    explicit CommandId(int value);
    int value() const noexcept { return value_; }
    bool is_delete() const noexcept { return value_ == kDeleteCommand; }
    bool is_go_back() const noexcept { return value_ == kGoBackCommand; }
    friend bool operator==(CommandId, CommandId) = default;

private:
    int value_;
};

struct CharGroup {
    std::string chars;  // 8 distinct charset members
    friend bool operator==(const CharGroup&, const CharGroup&) = default;
};
struct SingleChar {
    char symbol;
    friend bool operator==(const SingleChar&, const SingleChar&) = default;
};
struct DeleteCommand {
    friend bool operator==(const DeleteCommand&, const DeleteCommand&) = default;
};
struct GoBackCommand {
    friend bool operator==(const GoBackCommand&, const GoBackCommand&) = default;
};

using CommandLabel = std::variant<CharGroup, SingleChar, DeleteCommand, GoBackCommand>;

/// Text shown on a button ("ABCDEFGH", "a", "DELETE", "GO BACK").
std::string display_text(const CommandLabel& label);

struct Layout {
    Level level = Level::One;
    std::array<CommandLabel, kCommandCount> labels;

    const CommandLabel& at(CommandId id) const { return labels[id.value() - 1]; }
    friend bool operator==(const Layout&, const Layout&) = default;
};

/// 1-based reading-order position of a button, skipping the DELETE slot
/// (and GO BACK at level 2). Level 1 yields 1..9, level 2 yields 1..8.
int scan_rank(Level level, CommandId id);

/// The canonical roster chunked into nine groups of eight.
Layout alphabetical_layout(const CharacterSet& cs);

/// Level-1 layout for the entered text. Below `order` typed characters (or
/// with an order-0 model) this is the alphabetical layout. Otherwise the 72
/// symbols are ordered as: model predictions for the last `order`
/// characters, then unplaced symbols by corpus frequency, then anything left
/// in canonical order; the sequence is cut into nine groups that fill slots
/// 1-5 and 7-10. DELETE always sits at slot 6.
Layout level1_layout(std::string_view text_entered, const PredModel& model);

/// [c1 c2 c3 c4 GO-BACK DELETE c5 c6 c7 c8]
Layout level2_layout(const CharGroup& group);

struct SessionState;

/// One transition step of the two-level tree.
///
/// change_level_to == Two: descend into the group under `command` of the
/// current level-1 layout (DELETE is rejected).
/// change_level_to == One: from level 2, type the labeled character, go back
/// (5) or delete (6); from level 1 only DELETE is a level-1 transition.
/// Throws Error{InvalidCommandForTransition}.
Layout next_layout(Level change_level_to, CommandId command, const SessionState& state, const PredModel& model);

/// Wire form: {"level":1,"labels":[{"kind":"group","chars":"ABCDEFGH"},...]}.
nlohmann::json layout_to_json(const Layout& layout);
Layout layout_from_json(const nlohmann::json& doc);

}  // namespace flextree
