#include "flextree/ppm_model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "flextree/error.hpp"

namespace flextree {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
    throw Error(ErrorCode::CorruptModel, "corrupt model: " + what);
}

}  // namespace

PredModel::PredModel(int order, CharacterSet charset, ContextTable contexts, std::vector<Count> unigrams)
    : order_(order),
      charset_(std::move(charset)),
      contexts_(std::move(contexts)),
      unigrams_(std::move(unigrams)) {
    if (order_ < 0) {
        throw Error(ErrorCode::OrderNegative, "model order must be >= 0");
    }
    if (unigrams_.size() != charset_.size()) corrupt("unigram table size differs from charset");
    if (order_ == 0 && !contexts_.empty()) corrupt("order-0 model carries contexts");
    for (const auto& [context, counts] : contexts_) {
        if (context.size() != static_cast<std::size_t>(order_)) {
            corrupt("context '" + context + "' has length " + std::to_string(context.size()));
        }
        if (!is_normalized(context, charset_)) corrupt("context '" + context + "' leaves the charset");
        if (counts.empty()) corrupt("context '" + context + "' has no successors");
        for (const auto& [symbol, count] : counts) {
            if (symbol != kEndOfText && !charset_.contains(symbol)) {
                corrupt("context '" + context + "' predicts a non-member symbol");
            }
            if (count < 1) corrupt("context '" + context + "' holds a zero count");
        }
    }

    std::string ranking = charset_.symbols();
    std::stable_sort(ranking.begin(), ranking.end(), [this](char a, char b) {
        return unigrams_[charset_.rank(a)] > unigrams_[charset_.rank(b)];
    });
    frequency_ranking_ = std::move(ranking);
}

Count PredModel::unigram(char c) const {
    const int r = charset_.rank(c);
    return r < 0 ? 0 : unigrams_[r];
}

std::vector<Prediction> PredModel::predict(std::string_view context) const {
    if (context.size() != static_cast<std::size_t>(order_)) {
        throw Error(ErrorCode::BadContextLength, "context length " + std::to_string(context.size()) +
                                                     " does not match model order " + std::to_string(order_));
    }
    std::vector<Prediction> out;
    const auto it = contexts_.find(context);
    if (it == contexts_.end()) return out;

    for (const auto& [symbol, count] : it->second) {
        if (symbol == kEndOfText) continue;
        out.push_back({symbol, count});
    }
    std::sort(out.begin(), out.end(), [this](const Prediction& a, const Prediction& b) {
        if (a.count != b.count) return a.count > b.count;
        return charset_.rank(a.symbol) < charset_.rank(b.symbol);
    });
    return out;
}

std::string PredModel::frequency_ranking() const { return frequency_ranking_; }

PredModel train(std::span<const Corpus> documents, int order, const CharacterSet& cs) {
    if (order < 0) {
        throw Error(ErrorCode::OrderNegative, "model order must be >= 0");
    }
    const auto k = static_cast<std::size_t>(order);
    ContextTable contexts;
    std::vector<Count> unigrams(cs.size(), 0);

    auto bump = [&contexts](std::string_view context, char symbol) {
        auto it = contexts.find(context);
        if (it == contexts.end()) it = contexts.emplace(std::string(context), SymbolCounts{}).first;
        ++it->second[symbol];
    };

    for (const Corpus& doc : documents) {
        const std::string_view text = doc.text();
        if (!is_normalized(text, cs)) {
            throw Error(ErrorCode::CharacterNotInCharset, "training document is not normalized to the charset");
        }
        for (char c : text) ++unigrams[cs.rank(c)];
        if (k == 0 || text.size() < k) continue;
        for (std::size_t i = k; i < text.size(); ++i) {
            bump(text.substr(i - k, k), text[i]);
        }
        bump(text.substr(text.size() - k), kEndOfText);
    }
    return PredModel(order, cs, std::move(contexts), std::move(unigrams));
}

PredModel train(const Corpus& corpus, int order, const CharacterSet& cs) {
    return train(std::span<const Corpus>(&corpus, 1), order, cs);
}

std::string to_json(const PredModel& model) {
    using nlohmann::json;
    json charset = json::array();
    for (char c : model.charset().symbols()) charset.push_back(std::string(1, c));

    json unigrams = json::object();
    for (char c : model.charset().symbols()) unigrams[std::string(1, c)] = model.unigram(c);

    json contexts = json::object();
    for (const auto& [context, counts] : model.contexts()) {
        json inner = json::object();
        for (const auto& [symbol, count] : counts) inner[std::string(1, symbol)] = count;
        contexts[context] = std::move(inner);
    }

    // nlohmann::json objects are std::map-backed, so keys serialize sorted.
    json doc = {
        {"format", kModelFormat},
        {"order", model.order()},
        {"charset", std::move(charset)},
        {"unigrams", std::move(unigrams)},
        {"contexts", std::move(contexts)},
    };
    return doc.dump();
}

PredModel model_from_json(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        corrupt(std::string("unparseable JSON (") + e.what() + ")");
    }
    if (!doc.is_object()) corrupt("top level is not an object");
    const auto format = doc.find("format");
    if (format == doc.end() || !format->is_string()) corrupt("missing format tag");
    if (format->get<std::string>() != kModelFormat) {
        throw Error(ErrorCode::FormatVersionMismatch,
                    "unsupported model format '" + format->get<std::string>() + "'");
    }

    try {
        const json& order_field = doc.at("order");
        if (!order_field.is_number_integer()) corrupt("order is not an integer");
        const int order = order_field.get<int>();
        if (order < 0) corrupt("negative order");

        std::string symbols;
        for (const json& s : doc.at("charset")) {
            if (!s.is_string() || s.get<std::string>().size() != 1) corrupt("charset entry is not one character");
            symbols += s.get<std::string>();
        }
        CharacterSet cs = [&] {
            try {
                return CharacterSet::from_symbols(symbols);
            } catch (const Error& e) {
                corrupt(std::string("charset: ") + e.what());
            }
        }();

        std::vector<Count> unigrams(cs.size(), 0);
        for (const auto& [key, value] : doc.at("unigrams").items()) {
            if (key.size() != 1 || !cs.contains(key[0])) corrupt("unigram key '" + key + "' is not a member");
            if (!value.is_number_unsigned()) corrupt("unigram count for '" + key + "' is not a count");
            unigrams[cs.rank(key[0])] = value.get<Count>();
        }

        ContextTable contexts;
        for (const auto& [context, inner] : doc.at("contexts").items()) {
            if (!inner.is_object()) corrupt("context '" + context + "' is not an object");
            SymbolCounts counts;
            for (const auto& [symbol, value] : inner.items()) {
                if (symbol.size() != 1) corrupt("successor key '" + symbol + "' is not one character");
                if (!value.is_number_unsigned()) corrupt("successor count is not a count");
                counts[symbol[0]] = value.get<Count>();
            }
            contexts.emplace(context, std::move(counts));
        }
        return PredModel(order, std::move(cs), std::move(contexts), std::move(unigrams));
    } catch (const json::exception& e) {
        corrupt(std::string("schema violation (") + e.what() + ")");
    }
}

void save(const PredModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << to_json(model) << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failure on " + path.string());
}

PredModel load(const std::filesystem::path& path) {
    return model_from_json(read_text_file(path));
}

}  // namespace flextree
