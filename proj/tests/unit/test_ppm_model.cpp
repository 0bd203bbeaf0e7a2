#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "flextree/ppm_model.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace flextree;

namespace {

const CharacterSet& cs() { return default_charset(); }

Corpus text(const char* s) { return Corpus::from_normalized(s, cs()); }

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("flextree_model_" + name + ".json");
}

void write(const std::filesystem::path& p, const std::string& content) {
    std::ofstream(p, std::ios::binary) << content;
}

Count inner_total(const PredModel& m) {
    Count total = 0;
    for (const auto& [ctx, counts] : m.contexts())
        for (const auto& [sym, n] : counts) total += n;
    return total;
}

}  // namespace

TEST_CASE("Hello with order 2 yields the four worked-example contexts") {
    const PredModel m = train(text("Hello"), 2, cs());
    const ContextTable expected{
        {"He", {{'l', 1}}},
        {"el", {{'l', 1}}},
        {"ll", {{'o', 1}}},
        {"lo", {{'$', 1}}},
    };
    CHECK(m.contexts() == expected);
    CHECK(m.unigram('l') == 2);
    CHECK(m.unigram('H') == 1);
    CHECK(m.unigram('z') == 0);
}

TEST_CASE("train edge cases") {
    SUBCASE("empty corpus") {
        const PredModel m = train(text(""), 2, cs());
        CHECK(m.contexts().empty());
        CHECK(std::all_of(m.unigrams().begin(), m.unigrams().end(), [](Count c) { return c == 0; }));
    }
    SUBCASE("aaaa with order 1") {
        const PredModel m = train(text("aaaa"), 1, cs());
        CHECK(m.contexts() == ContextTable{{"a", {{'a', 3}, {'$', 1}}}});
        CHECK(m.unigram('a') == 4);
    }
    SUBCASE("order 0 keeps unigrams only") {
        const PredModel m = train(text("Hello"), 0, cs());
        CHECK(m.contexts().empty());
        CHECK(m.unigram('l') == 2);
    }
    SUBCASE("document shorter than the order") {
        const PredModel m = train(text("ab"), 3, cs());
        CHECK(m.contexts().empty());
        CHECK(m.unigram('a') == 1);
    }
    SUBCASE("negative order") { CHECK_ERROR(train(text("abc"), -1, cs()), ErrorCode::OrderNegative); }
    SUBCASE("each document ends with its own $ event") {
        const std::vector<Corpus> docs{text("ab"), text("ab")};
        const PredModel m = train(docs, 1, cs());
        CHECK(m.contexts() == ContextTable{{"a", {{'b', 2}}}, {"b", {{'$', 2}}}});
    }
}

TEST_CASE("train agrees with brute-force substring counting") {
    std::mt19937 rng(11);
    const std::string small_alphabet = "abc -";
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = static_cast<std::size_t>(trial % 4);
        std::vector<std::string> raw;
        std::vector<Corpus> docs;
        const int n_docs = 1 + trial % 3;
        for (int d = 0; d < n_docs; ++d) {
            raw.push_back(oracle::random_text(rng, small_alphabet, static_cast<std::size_t>(trial % 23)));
            docs.push_back(Corpus::from_normalized(raw.back(), cs()));
        }
        const PredModel m = train(docs, static_cast<int>(k), cs());
        const auto expected = oracle::brute_force_contexts(raw, k, cs().symbols());
        REQUIRE(m.contexts().size() == expected.size());
        for (const auto& [context, inner] : expected) {
            const auto it = m.contexts().find(context);
            REQUIRE(it != m.contexts().end());
            CHECK(std::map<char, Count>(it->second.begin(), it->second.end()) == inner);
        }
    }
}

TEST_CASE("count conservation: n - K + 1 events per single document") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int k = trial % 5;
        const std::size_t n = static_cast<std::size_t>(k + trial % 40);
        const std::string s = oracle::random_text(rng, cs().symbols(), n);
        const PredModel m = train(Corpus::from_normalized(s, cs()), k, cs());
        if (k == 0) {
            CHECK(inner_total(m) == 0);
        } else {
            CHECK(inner_total(m) == n - static_cast<std::size_t>(k) + 1);
        }
        CHECK(std::accumulate(m.unigrams().begin(), m.unigrams().end(), Count{0}) == n);
    }
}

TEST_CASE("document order changes neither table; character order changes contexts") {
    const std::vector<Corpus> forward{text("the cat"), text("sat on"), text("a mat")};
    const std::vector<Corpus> permuted{text("a mat"), text("the cat"), text("sat on")};
    CHECK(train(forward, 2, cs()) == train(permuted, 2, cs()));

    const PredModel a = train(text("stressed"), 2, cs());
    const PredModel b = train(text("desserts"), 2, cs());
    CHECK(a.unigrams() == b.unigrams());
    CHECK(a.contexts() != b.contexts());
}

TEST_CASE("predict") {
    const PredModel hello = train(text("Hello"), 2, cs());
    CHECK(hello.predict("He") == std::vector<Prediction>{{'l', 1}});
    CHECK(hello.predict("zz").empty());
    CHECK(hello.predict("lo").empty());  // only $ follows
    CHECK_ERROR(hello.predict("H"), ErrorCode::BadContextLength);
    CHECK_ERROR(hello.predict("Hel"), ErrorCode::BadContextLength);

    const PredModel abac = train(text("abac"), 1, cs());
    CHECK(abac.predict("a") == std::vector<Prediction>{{'b', 1}, {'c', 1}});

    const PredModel order0 = train(text("abc"), 0, cs());
    CHECK(order0.predict("").empty());
}

TEST_CASE("predict output is sorted, $-free and drawn from the context's successors") {
    std::mt19937 rng(5);
    const std::string alphabet = "aeiou tn";
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + trial % 3;
        const PredModel m = train(Corpus::from_normalized(oracle::random_text(rng, alphabet, 400), cs()), k, cs());
        for (const auto& [context, successors] : m.contexts()) {
            const auto p = m.predict(context);
            CHECK(p == m.predict(context));
            for (std::size_t i = 0; i < p.size(); ++i) {
                CHECK(p[i].symbol != kEndOfText);
                CHECK(successors.at(p[i].symbol) == p[i].count);
                if (i > 0) {
                    const bool ordered = p[i - 1].count > p[i].count ||
                                         (p[i - 1].count == p[i].count &&
                                          cs().rank(p[i - 1].symbol) < cs().rank(p[i].symbol));
                    CHECK(ordered);
                }
            }
            const std::size_t expected = successors.size() - (successors.count(kEndOfText) ? 1 : 0);
            CHECK(p.size() == expected);
        }
    }
}

TEST_CASE("frequency_ranking") {
    SUBCASE("aab") {
        const std::string r = train(text("aab"), 1, cs()).frequency_ranking();
        std::string rest = cs().symbols();
        rest.erase(std::remove_if(rest.begin(), rest.end(), [](char c) { return c == 'a' || c == 'b'; }), rest.end());
        CHECK(r == "ab" + rest);
    }
    SUBCASE("all zero counts give canonical order") {
        CHECK(train(text(""), 2, cs()).frequency_ranking() == cs().symbols());
    }
    SUBCASE("English text is led by space") {
        const std::string raw = read_text_file(std::filesystem::path(FLEXTREE_DATA_DIR) / "corpus" / "alice29.txt");
        const Corpus corpus = normalize(raw, cs());
        const PredModel m = train(corpus, 0, cs());
        const std::string& t = corpus.text();
        char most = cs().at(0);
        for (char c : cs().symbols()) {
            if (std::count(t.begin(), t.end(), c) > std::count(t.begin(), t.end(), most)) most = c;
        }
        CHECK(most == ' ');
        CHECK(m.frequency_ranking().front() == ' ');
    }
}

TEST_CASE("model file") {
    const PredModel hello = train(text("Hello"), 2, cs());

    SUBCASE("round trip is identical and byte-deterministic") {
        const auto p = temp_file("hello");
        save(hello, p);
        const PredModel back = load(p);
        CHECK(back == hello);
        const auto p2 = temp_file("hello2");
        save(back, p2);
        CHECK(read_text_file(p) == read_text_file(p2));
    }
    SUBCASE("wire layout") {
        const std::string json = to_json(hello);
        CHECK(json.rfind(R"({"charset":["A","B",)", 0) == 0);
        CHECK(json.find(R"("contexts":{"He":{"l":1},"el":{"l":1},"ll":{"o":1},"lo":{"$":1}})") != std::string::npos);
        CHECK(json.find(R"("format":"flextree-ppm/1")") != std::string::npos);
        CHECK(json.find(R"("order":2)") != std::string::npos);
    }
    SUBCASE("format version mismatch") {
        std::string json = to_json(hello);
        json.replace(json.find("flextree-ppm/1"), 14, "flextree-ppm/9");
        CHECK_ERROR(model_from_json(json), ErrorCode::FormatVersionMismatch);
    }
    SUBCASE("context key of the wrong length") {
        std::string json = to_json(hello);
        json.replace(json.find(R"("He":)"), 5, R"("Hex":)");
        CHECK_ERROR(model_from_json(json), ErrorCode::CorruptModel);
    }
    SUBCASE("other invariant violations") {
        std::string zero = to_json(hello);
        zero.replace(zero.find(R"("He":{"l":1})"), 12, R"("He":{"l":0})");
        CHECK_ERROR(model_from_json(zero), ErrorCode::CorruptModel);

        std::string dollar_ctx = to_json(hello);
        dollar_ctx.replace(dollar_ctx.find(R"("He":)"), 5, R"("H$":)");
        CHECK_ERROR(model_from_json(dollar_ctx), ErrorCode::CorruptModel);

        std::string order0 = to_json(hello);
        order0.replace(order0.find(R"("order":2)"), 9, R"("order":0)");
        CHECK_ERROR(model_from_json(order0), ErrorCode::CorruptModel);

        CHECK_ERROR(model_from_json("{not json"), ErrorCode::CorruptModel);
        CHECK_ERROR(model_from_json(R"({"format":"flextree-ppm/1"})"), ErrorCode::CorruptModel);
    }
    SUBCASE("missing file") { CHECK_ERROR(load("/nonexistent/model.json"), ErrorCode::IoError); }
    SUBCASE("unwritable path") { CHECK_ERROR(save(hello, "/nonexistent/dir/model.json"), ErrorCode::IoError); }
}
