#include "flextree/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <tuple>

#include "flextree/error.hpp"

namespace flextree {

namespace {

template <typename Pred>
CommandId find_command(const Layout& layout, Pred&& matches) {
    for (int id = 1; id <= kCommandCount; ++id) {
        if (matches(layout.labels[id - 1])) return CommandId(id);
    }
    throw Error(ErrorCode::CharacterNotInCharset, "character is not on the current layout");
}

}  // namespace

SimReport simulate_optimal(std::string_view target, const PredModel& model) {
    if (!is_normalized(target, model.charset())) {
        throw Error(ErrorCode::CharacterNotInCharset, "target contains characters outside the charset");
    }
    SimReport report;
    report.order = model.order();
    report.sentence.assign(target);

    // Virtual time: one millisecond per command.
    TypingSession session(model, std::string(target), Clock{});
    std::int64_t t = 0;
    std::size_t rank1_sum = 0;
    std::size_t rank2_sum = 0;
    std::size_t hits = 0;
    for (char c : target) {
        const CommandId group = find_command(session.state().current_layout, [c](const CommandLabel& l) {
            const auto* g = std::get_if<CharGroup>(&l);
            return g != nullptr && g->chars.find(c) != std::string::npos;
        });
        const int r1 = scan_rank(Level::One, group);
        rank1_sum += static_cast<std::size_t>(r1);
        if (r1 == 1) ++hits;
        session.apply_command(group, ++t);

        const CommandId key = find_command(session.state().current_layout, [c](const CommandLabel& l) {
            const auto* s = std::get_if<SingleChar>(&l);
            return s != nullptr && s->symbol == c;
        });
        rank2_sum += static_cast<std::size_t>(scan_rank(Level::Two, key));
        session.apply_command(key, ++t);
    }

    const auto& state = session.state();
    report.commands_used = state.events.size();
    report.letters_typed = static_cast<std::size_t>(
        std::count_if(state.events.begin(), state.events.end(),
                      [](const SessionEvent& e) { return e.kind == EventKind::CharTyped; }));
    report.final_text = state.text_entered;
    if (!target.empty()) {
        const double n = static_cast<double>(target.size());
        report.mean_level1_rank = static_cast<double>(rank1_sum) / n;
        report.mean_level2_rank = static_cast<double>(rank2_sum) / n;
        report.hit_at_group1 = static_cast<double>(hits) / n;
    }
    return report;
}

DeletionReport simulate_deletion(TypingSession& session, std::size_t n_chars) {
    if (session.state().text_entered.size() < n_chars) {
        throw Error(ErrorCode::NotEnoughText, "cannot delete " + std::to_string(n_chars) + " characters from " +
                                                  std::to_string(session.state().text_entered.size()));
    }
    DeletionReport report;
    std::int64_t t = session.state().last_event_at_ms;
    while (report.letters_deleted < n_chars) {
        const SessionEvent e = session.apply_command(CommandId(kDeleteCommand), ++t);
        ++report.commands;
        if (e.kind == EventKind::Deleted) ++report.letters_deleted;
    }
    return report;
}

namespace {

// Portable uniform draw in [0, n); std::uniform_int_distribution is not
// specified bit-for-bit across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

struct Span {
    std::size_t doc;
    std::size_t begin;
};

}  // namespace

SampledSplit sample_sentences(std::span<const Corpus> documents, const CharacterSet& cs,
                              const BenchmarkOptions& options) {
    const std::size_t len = options.sentence_len;
    const std::size_t n = options.n_sentences;
    if (len == 0) throw Error(ErrorCode::CorpusTooSmall, "sentence length must be positive");

    std::vector<std::size_t> starts_per_doc;
    std::uint64_t total_starts = 0;
    std::size_t total_chars = 0;
    for (const Corpus& doc : documents) {
        if (!is_normalized(doc.text(), cs)) {
            throw Error(ErrorCode::CharacterNotInCharset, "benchmark corpus is not normalized to the charset");
        }
        const std::size_t starts = doc.size() >= len ? doc.size() - len + 1 : 0;
        starts_per_doc.push_back(starts);
        total_starts += starts;
        total_chars += doc.size();
    }
    const bool held_out = options.mode == SamplingMode::HeldOut;
    // Held-out sampling must leave at least as much text for training as it removes.
    if (total_starts == 0 || (held_out && total_chars < 2 * n * len)) {
        throw Error(ErrorCode::CorpusTooSmall, "corpus of " + std::to_string(total_chars) + " characters cannot supply " +
                                                   std::to_string(n) + " sentences of " + std::to_string(len));
    }

    std::mt19937_64 rng(options.seed);
    std::vector<Span> chosen;
    const std::size_t max_attempts = 1000 + 100 * n;
    std::size_t attempts = 0;
    while (chosen.size() < n) {
        if (++attempts > max_attempts) {
            throw Error(ErrorCode::CorpusTooSmall, "could not place " + std::to_string(n) +
                                                       " non-overlapping sentences");
        }
        std::uint64_t pick = uniform_below(rng, total_starts);
        std::size_t doc = 0;
        while (pick >= starts_per_doc[doc]) pick -= starts_per_doc[doc++];
        const Span span{doc, static_cast<std::size_t>(pick)};
        if (held_out) {
            const bool overlaps = std::any_of(chosen.begin(), chosen.end(), [&](const Span& s) {
                return s.doc == span.doc && s.begin < span.begin + len && span.begin < s.begin + len;
            });
            if (overlaps) continue;
        }
        chosen.push_back(span);
    }

    SampledSplit split;
    for (const Span& s : chosen) split.sentences.push_back(documents[s.doc].text().substr(s.begin, len));

    if (!held_out) {
        split.training.assign(documents.begin(), documents.end());
        return split;
    }
    std::vector<Span> sorted = chosen;
    std::sort(sorted.begin(), sorted.end(),
              [](const Span& a, const Span& b) { return std::tie(a.doc, a.begin) < std::tie(b.doc, b.begin); });
    for (std::size_t d = 0; d < documents.size(); ++d) {
        const std::string& text = documents[d].text();
        std::size_t cursor = 0;
        for (const Span& s : sorted) {
            if (s.doc != d) continue;
            if (s.begin > cursor) split.training.push_back(Corpus::from_normalized(text.substr(cursor, s.begin - cursor), cs));
            cursor = s.begin + len;
        }
        if (cursor < text.size()) split.training.push_back(Corpus::from_normalized(text.substr(cursor), cs));
    }
    return split;
}

namespace {

FieldStats stats_of(const std::vector<double>& xs) {
    FieldStats s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

}  // namespace

BenchmarkRow aggregate(int order, std::span<const SimReport> reports) {
    std::vector<double> l1, l2, hit, cpl;
    for (const SimReport& r : reports) {
        if (r.letters_typed == 0) continue;
        l1.push_back(r.mean_level1_rank);
        l2.push_back(r.mean_level2_rank);
        hit.push_back(r.hit_at_group1);
        cpl.push_back(static_cast<double>(r.commands_used) / static_cast<double>(r.letters_typed));
    }
    BenchmarkRow row;
    row.order = order;
    row.sentence_count = reports.size();
    row.level1_rank = stats_of(l1);
    row.level2_rank = stats_of(l2);
    row.hit_at_group1 = stats_of(hit);
    row.commands_per_letter = stats_of(cpl);
    return row;
}

std::vector<BenchmarkRow> run_benchmark(std::span<const Corpus> documents, const CharacterSet& cs,
                                        const BenchmarkOptions& options) {
    for (int k : options.orders) {
        if (k < 0) throw Error(ErrorCode::OrderNegative, "model order must be >= 0");
    }
    const SampledSplit split = sample_sentences(documents, cs, options);

    // Orders are independent: each task trains its own model and owns its sessions.
    std::vector<std::future<BenchmarkRow>> tasks;
    for (int k : options.orders) {
        tasks.push_back(std::async(std::launch::async, [&split, &cs, k] {
            const PredModel model = train(split.training, k, cs);
            std::vector<SimReport> reports;
            reports.reserve(split.sentences.size());
            for (const std::string& s : split.sentences) reports.push_back(simulate_optimal(s, model));
            return aggregate(k, reports);
        }));
    }
    std::vector<BenchmarkRow> rows;
    for (auto& t : tasks) rows.push_back(t.get());
    return rows;
}

std::string config_name(int order) { return order == 0 ? "NoPPM" : "PPM" + std::to_string(order); }

namespace {

std::string fixed4(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

std::string csv_quote(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    return fields;
}

}  // namespace

std::string benchmark_csv(std::span<const BenchmarkRow> rows) {
    std::string out(kBenchmarkCsvHeader);
    out += '\n';
    for (const BenchmarkRow& r : rows) {
        out += std::to_string(r.order) + ',' + std::to_string(r.sentence_count) + ',' + fixed4(r.level1_rank.mean) +
               ',' + fixed4(r.level1_rank.stddev) + ',' + fixed4(r.level2_rank.mean) + ',' +
               fixed4(r.hit_at_group1.mean) + ',' + fixed4(r.commands_per_letter.mean) + '\n';
    }
    return out;
}

std::vector<BenchmarkRow> parse_benchmark_csv(std::string_view csv) {
    std::stringstream in{std::string(csv)};
    std::string line;
    if (!std::getline(in, line) || line != kBenchmarkCsvHeader) {
        throw std::invalid_argument("benchmark CSV header mismatch");
    }
    std::vector<BenchmarkRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_commas(line);
        if (f.size() != 7) throw std::invalid_argument("benchmark CSV row needs 7 fields");
        BenchmarkRow r;
        r.order = std::stoi(f[0]);
        r.sentence_count = std::stoul(f[1]);
        r.level1_rank = {std::stod(f[2]), std::stod(f[3])};
        r.level2_rank.mean = std::stod(f[4]);
        r.hit_at_group1.mean = std::stod(f[5]);
        r.commands_per_letter.mean = std::stod(f[6]);
        rows.push_back(r);
    }
    return rows;
}

std::string benchmark_table(std::span<const BenchmarkRow> rows) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-7s %9s %19s %12s %13s %12s\n", "config", "sentences", "level-1 rank",
                  "level-2 rank", "hit@group1", "cmds/letter");
    out += buf;
    for (const BenchmarkRow& r : rows) {
        const std::string l1 = fixed4(r.level1_rank.mean) + " +/- " + fixed4(r.level1_rank.stddev);
        std::snprintf(buf, sizeof buf, "%-7s %9zu %19s %12s %13s %12s\n", config_name(r.order).c_str(),
                      r.sentence_count, l1.c_str(), fixed4(r.level2_rank.mean).c_str(),
                      fixed4(r.hit_at_group1.mean).c_str(), fixed4(r.commands_per_letter.mean).c_str());
        out += buf;
    }
    return out;
}

std::string simulation_csv(std::span<const SimReport> reports) {
    std::string out(kSimulationCsvHeader);
    out += '\n';
    for (const SimReport& r : reports) {
        out += std::to_string(r.order) + ',' + csv_quote(r.sentence) + ',' + std::to_string(r.commands_used) + ',' +
               std::to_string(r.letters_typed) + ',' + fixed4(r.mean_level1_rank) + ',' +
               fixed4(r.mean_level2_rank) + ',' + fixed4(r.hit_at_group1) + '\n';
    }
    return out;
}

std::string simulation_table(std::span<const SimReport> reports) {
    std::string out;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-7s %8s %7s %12s %12s %10s  %s\n", "config", "commands", "letters",
                  "level-1 rank", "level-2 rank", "hit@group1", "sentence");
    out += buf;
    for (const SimReport& r : reports) {
        std::snprintf(buf, sizeof buf, "%-7s %8zu %7zu %12s %12s %10s  \"%s\"\n", config_name(r.order).c_str(),
                      r.commands_used, r.letters_typed, fixed4(r.mean_level1_rank).c_str(),
                      fixed4(r.mean_level2_rank).c_str(), fixed4(r.hit_at_group1).c_str(), r.sentence.c_str());
        out += buf;
    }
    return out;
}

}  // namespace flextree
