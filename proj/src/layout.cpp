#include "flextree/layout.hpp"

#include <bitset>

#include "flextree/error.hpp"
#include "flextree/session.hpp"

namespace flextree {

CommandId::CommandId(int value) : value_(value) {
    if (value < 1 || value > kCommandCount) {
        throw Error(ErrorCode::BadCommandId, "command id " + std::to_string(value) + " outside 1..10");
    }
}

std::string display_text(const CommandLabel& label) {
    struct Visitor {
        std::string operator()(const CharGroup& g) const { return g.chars; }
        std::string operator()(const SingleChar& c) const { return std::string(1, c.symbol); }
        std::string operator()(const DeleteCommand&) const { return "DELETE"; }
        std::string operator()(const GoBackCommand&) const { return "GO BACK"; }
    };
    return std::visit(Visitor{}, label);
}

int scan_rank(Level level, CommandId id) {
    const int v = id.value();
    if (level == Level::One) {
        if (v == kDeleteCommand) return 0;
        return v < kDeleteCommand ? v : v - 1;
    }
    if (v == kDeleteCommand || v == kGoBackCommand) return 0;
    return v < kGoBackCommand ? v : v - 2;
}

namespace {

// Slots 1-5, 7-10 receive groups 1..9; slot 6 is DELETE.
Layout chunk_into_level1(std::string_view ordering) {
    Layout layout;
    layout.level = Level::One;
    std::size_t group = 0;
    for (int slot = 0; slot < kCommandCount; ++slot) {
        if (slot + 1 == kDeleteCommand) {
            layout.labels[slot] = DeleteCommand{};
            continue;
        }
        layout.labels[slot] = CharGroup{std::string(ordering.substr(group * kGroupSize, kGroupSize))};
        ++group;
    }
    return layout;
}

}  // namespace

Layout alphabetical_layout(const CharacterSet& cs) { return chunk_into_level1(cs.symbols()); }

Layout level1_layout(std::string_view text_entered, const PredModel& model) {
    const CharacterSet& cs = model.charset();
    const auto k = static_cast<std::size_t>(model.order());
    if (k == 0 || text_entered.size() < k) return alphabetical_layout(cs);

    std::string ordering;
    ordering.reserve(CharacterSet::kSize);
    std::bitset<CharacterSet::kSize> placed;
    auto place = [&](char c) {
        const int r = cs.rank(c);
        if (r < 0 || placed.test(r)) return;
        placed.set(r);
        ordering.push_back(c);
    };

    for (const Prediction& p : model.predict(text_entered.substr(text_entered.size() - k))) place(p.symbol);
    for (char c : model.frequency_ranking()) place(c);
    for (char c : cs.symbols()) place(c);

    return chunk_into_level1(ordering);
}

Layout level2_layout(const CharGroup& group) {
    Layout layout;
    layout.level = Level::Two;
    const std::string& g = group.chars;
    for (int i = 0; i < 4; ++i) {
        layout.labels[i] = SingleChar{g.at(i)};
        layout.labels[i + 6] = SingleChar{g.at(i + 4)};
    }
    layout.labels[kGoBackCommand - 1] = GoBackCommand{};
    layout.labels[kDeleteCommand - 1] = DeleteCommand{};
    return layout;
}

Layout next_layout(Level change_level_to, CommandId command, const SessionState& state, const PredModel& model) {
    auto invalid = [&](const char* why) {
        return Error(ErrorCode::InvalidCommandForTransition,
                     "command " + std::to_string(command.value()) + ": " + why);
    };

    if (change_level_to == Level::Two) {
        if (state.level != Level::One) throw invalid("can only descend from level 1");
        const auto* group = std::get_if<CharGroup>(&state.current_layout.at(command));
        if (group == nullptr) throw invalid("not a character group");
        return level2_layout(*group);
    }

    std::string text = state.text_entered;
    if (command.is_delete()) {
        if (!text.empty()) text.pop_back();
    } else if (state.level == Level::One) {
        throw invalid("level-1 commands other than DELETE descend to level 2");
    } else if (!command.is_go_back()) {
        const auto* typed = std::get_if<SingleChar>(&state.current_layout.at(command));
        if (typed == nullptr) throw invalid("not a character");
        text.push_back(typed->symbol);
    }
    return level1_layout(text, model);
}

nlohmann::json layout_to_json(const Layout& layout) {
    using nlohmann::json;
    json labels = json::array();
    for (const CommandLabel& label : layout.labels) {
        struct Visitor {
            json operator()(const CharGroup& g) const { return {{"kind", "group"}, {"chars", g.chars}}; }
            json operator()(const SingleChar& c) const {
                return {{"kind", "char"}, {"char", std::string(1, c.symbol)}};
            }
            json operator()(const DeleteCommand&) const { return {{"kind", "delete"}}; }
            json operator()(const GoBackCommand&) const { return {{"kind", "goback"}}; }
        };
        labels.push_back(std::visit(Visitor{}, label));
    }
    return {{"level", static_cast<int>(layout.level)}, {"labels", std::move(labels)}};
}

Layout layout_from_json(const nlohmann::json& doc) {
    Layout layout;
    const int level = doc.at("level").get<int>();
    if (level != 1 && level != 2) throw std::invalid_argument("layout level must be 1 or 2");
    layout.level = static_cast<Level>(level);
    const auto& labels = doc.at("labels");
    if (!labels.is_array() || labels.size() != kCommandCount) {
        throw std::invalid_argument("layout needs exactly 10 labels");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& l = labels[i];
        const auto kind = l.at("kind").get<std::string>();
        if (kind == "group") {
            layout.labels[i] = CharGroup{l.at("chars").get<std::string>()};
        } else if (kind == "char") {
            const auto s = l.at("char").get<std::string>();
            if (s.size() != 1) throw std::invalid_argument("char label must hold one character");
            layout.labels[i] = SingleChar{s[0]};
        } else if (kind == "delete") {
            layout.labels[i] = DeleteCommand{};
        } else if (kind == "goback") {
            layout.labels[i] = GoBackCommand{};
        } else {
            throw std::invalid_argument("unknown label kind '" + kind + "'");
        }
    }
    return layout;
}

}  // namespace flextree
