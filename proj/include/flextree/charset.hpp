#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace flextree {

/// End-of-text marker recorded by the context model. Never a typeable symbol.
inline constexpr char kEndOfText = '$';

/// The ordered 72-symbol typing alphabet. Position in the roster is the
/// canonical rank used for every tie-break in the engine.
///
/// Symbols are single printable ASCII bytes; `$` is reserved.
class CharacterSet {
public:
    static constexpr std::size_t kSize = 72;

    /// Validates and adopts `symbols` as the roster, in order.
    /// Throws Error{WrongCount | DuplicateSymbol | InvalidSymbol}.
    static CharacterSet from_symbols(std::string_view symbols);

    const std::string& symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    char at(std::size_t index) const { return symbols_.at(index); }

    bool contains(char c) const noexcept { return rank_[static_cast<unsigned char>(c)] >= 0; }

    /// Canonical rank 0..71, or -1 when `c` is not a member.
    int rank(char c) const noexcept { return rank_[static_cast<unsigned char>(c)]; }

    friend bool operator==(const CharacterSet& a, const CharacterSet& b) noexcept {
        return a.symbols_ == b.symbols_;
    }

private:
    CharacterSet() { rank_.fill(-1); }

    std::string symbols_;
    std::array<std::int16_t, 256> rank_{};
};

/// A-Z, a-z, 0-9, the specials . , " ' ; ? | _ then space and hyphen.
const CharacterSet& default_charset();

/// Reads a charset file: UTF-8, exactly 72 lines, one character per line.
CharacterSet load_charset(const std::filesystem::path& spec_file);

/// Training text whose every character is a member of the charset it was
/// built against.
class Corpus {
public:
    Corpus() = default;

    /// Adopts already-clean text; throws Error{CharacterNotInCharset} otherwise.
    static Corpus from_normalized(std::string text, const CharacterSet& cs);

    const std::string& text() const noexcept { return text_; }
    std::size_t size() const noexcept { return text_.size(); }
    bool empty() const noexcept { return text_.empty(); }

private:
    friend Corpus normalize(std::string_view raw_text, const CharacterSet& cs);
    explicit Corpus(std::string text) : text_(std::move(text)) {}

    std::string text_;
};

/// Replaces every code point outside `cs` with a space, never emitting a
/// replacement space directly after another space. Member characters pass
/// through unchanged. Malformed UTF-8 bytes count as out-of-alphabet.
/// With a roster that lacks space, foreign characters are dropped.
Corpus normalize(std::string_view raw_text, const CharacterSet& cs);

bool is_normalized(std::string_view text, const CharacterSet& cs) noexcept;

/// Whole-file read; throws Error{IoError}.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace flextree
