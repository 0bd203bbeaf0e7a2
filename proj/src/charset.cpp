#include "flextree/charset.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "flextree/error.hpp"

namespace flextree {

CharacterSet CharacterSet::from_symbols(std::string_view symbols) {
    if (symbols.size() != kSize) {
        throw Error(ErrorCode::WrongCount, "charset must have exactly 72 symbols, got " +
                                               std::to_string(symbols.size()));
    }
    CharacterSet cs;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const char c = symbols[i];
        const auto byte = static_cast<unsigned char>(c);
        if (byte < 0x20 || byte > 0x7e || c == kEndOfText) {
            throw Error(ErrorCode::InvalidSymbol,
                        "charset symbol #" + std::to_string(i) + " is not a usable printable ASCII character");
        }
        if (cs.rank_[byte] >= 0) {
            throw Error(ErrorCode::DuplicateSymbol, std::string("charset repeats symbol '") + c + "'");
        }
        cs.rank_[byte] = static_cast<std::int16_t>(i);
    }
    cs.symbols_.assign(symbols);
    return cs;
}

const CharacterSet& default_charset() {
    static const CharacterSet cs = CharacterSet::from_symbols(
        "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
        "abcdefghijklmnopqrstuvwxyz"
        "0123456789"
        ".,\"';?|_"
        " -");
    return cs;
}

CharacterSet load_charset(const std::filesystem::path& spec_file) {
    std::ifstream in(spec_file, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open charset file " + spec_file.string());
    }
    std::string symbols;
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lines;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.size() != 1) {
            // Multi-byte UTF-8 sequences land here too; the engine is single-byte.
            throw Error(ErrorCode::InvalidSymbol,
                        "charset line " + std::to_string(lines) + " must hold exactly one character");
        }
        symbols += line;
    }
    if (in.bad()) {
        throw Error(ErrorCode::IoError, "read failure on " + spec_file.string());
    }
    return CharacterSet::from_symbols(symbols);
}

Corpus Corpus::from_normalized(std::string text, const CharacterSet& cs) {
    if (!is_normalized(text, cs)) {
        throw Error(ErrorCode::CharacterNotInCharset, "text contains characters outside the charset");
    }
    return Corpus(std::move(text));
}

namespace {

// Length of the UTF-8 sequence starting at `pos`, or 1 for a malformed lead.
std::size_t utf8_sequence_length(std::string_view s, std::size_t pos) {
    const auto lead = static_cast<unsigned char>(s[pos]);
    std::size_t len = 1;
    if ((lead & 0xE0) == 0xC0) len = 2;
    else if ((lead & 0xF0) == 0xE0) len = 3;
    else if ((lead & 0xF8) == 0xF0) len = 4;
    if (len == 1 || pos + len > s.size()) return 1;
    for (std::size_t k = 1; k < len; ++k) {
        if ((static_cast<unsigned char>(s[pos + k]) & 0xC0) != 0x80) return 1;
    }
    return len;
}

}  // namespace

Corpus normalize(std::string_view raw_text, const CharacterSet& cs) {
    std::string out;
    out.reserve(raw_text.size());
    std::size_t pos = 0;
    while (pos < raw_text.size()) {
        const char c = raw_text[pos];
        if (static_cast<unsigned char>(c) < 0x80 && cs.contains(c)) {
            out.push_back(c);
            ++pos;
            continue;
        }
        pos += utf8_sequence_length(raw_text, pos);
        // A roster without space has nothing to substitute; drop instead.
        if (!cs.contains(' ')) continue;
        if (out.empty() || out.back() != ' ') out.push_back(' ');
    }
    return Corpus(std::move(out));
}

bool is_normalized(std::string_view text, const CharacterSet& cs) noexcept {
    for (char c : text) {
        if (!cs.contains(c)) return false;
    }
    return true;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoError, "read failure on " + path.string());
    }
    return std::move(buf).str();
}

}  // namespace flextree
