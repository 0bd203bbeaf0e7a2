#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flextree/charset.hpp"

namespace flextree {

using Count = std::uint64_t;

/// Next-symbol frequencies for one context. Keys are charset members or `$`.
using SymbolCounts = std::map<char, Count>;

/// Context string (exactly `order` charset members) -> next-symbol counts.
/// std::map keeps keys in byte order, which the model file relies on.
using ContextTable = std::map<std::string, SymbolCounts, std::less<>>;

struct Prediction {
    char symbol;
    Count count;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Fixed-order character context model. Immutable once built; share freely
/// across threads.
///
/// There is deliberately no escape to shorter contexts: a context that was
/// never seen predicts nothing, and the layout falls through to global
/// character frequency.
class PredModel {
public:
    PredModel(int order, CharacterSet charset, ContextTable contexts, std::vector<Count> unigrams);

    int order() const noexcept { return order_; }
    const CharacterSet& charset() const noexcept { return charset_; }
    const ContextTable& contexts() const noexcept { return contexts_; }

    /// Indexed by canonical rank.
    const std::vector<Count>& unigrams() const noexcept { return unigrams_; }
    Count unigram(char c) const;

    /// Charset members seen after `context`, by count descending then rank.
    /// `$` is never returned. Throws Error{BadContextLength} unless
    /// context.size() == order().
    std::vector<Prediction> predict(std::string_view context) const;

    /// All charset members by unigram count descending, ties by rank.
    std::string frequency_ranking() const;

    friend bool operator==(const PredModel&, const PredModel&) = default;

private:
    int order_;
    CharacterSet charset_;
    ContextTable contexts_;
    std::vector<Count> unigrams_;
    std::string frequency_ranking_;
};

/// Counts every order-K window of each document, then one `$` event after
/// each document's final context. Throws Error{OrderNegative}.
PredModel train(std::span<const Corpus> documents, int order, const CharacterSet& cs);
PredModel train(const Corpus& corpus, int order, const CharacterSet& cs);

inline constexpr std::string_view kModelFormat = "flextree-ppm/1";

/// Serialized model document; keys are emitted in byte order so output is
/// deterministic.
std::string to_json(const PredModel& model);
PredModel model_from_json(std::string_view text);

void save(const PredModel& model, const std::filesystem::path& path);
PredModel load(const std::filesystem::path& path);

}  // namespace flextree
