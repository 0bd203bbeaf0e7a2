#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flextree/ppm_model.hpp"
#include "flextree/session.hpp"

namespace flextree {

/// Outcome of typing one sentence with a perfect user.
///
/// Scan ranks are reading-order positions of the chosen button (DELETE and
/// GO BACK skipped): 1..9 at level 1, 1..8 at level 2. They stand in for
/// visual search time, the only cost PPM can reduce since every letter
/// takes exactly two commands.
struct SimReport {
    int order = 0;
    std::string sentence;
    std::size_t commands_used = 0;
    std::size_t letters_typed = 0;
    double mean_level1_rank = 0.0;
    double mean_level2_rank = 0.0;
    double hit_at_group1 = 0.0;
    std::string final_text;
};

/// Drives a real TypingSession: for each target character press its
/// level-1 group, then the character. Throws Error{CharacterNotInCharset}.
SimReport simulate_optimal(std::string_view target, const PredModel& model);

struct DeletionReport {
    std::size_t commands = 0;
    std::size_t letters_deleted = 0;

    /// Absent when nothing was deleted.
    std::optional<double> commands_per_letter() const {
        if (letters_deleted == 0) return std::nullopt;
        return static_cast<double>(commands) / static_cast<double>(letters_deleted);
    }
};

/// Erases `n_chars` from the session by pressing DELETE, counting presses.
/// Works from either level. Throws Error{NotEnoughText}.
DeletionReport simulate_deletion(TypingSession& session, std::size_t n_chars);

enum class SamplingMode { HeldOut, InCorpus };

struct BenchmarkOptions {
    std::vector<int> orders{0, 1, 2, 3};
    std::size_t n_sentences = 100;
    std::size_t sentence_len = 30;
    std::uint64_t seed = 1;
    SamplingMode mode = SamplingMode::HeldOut;
};

struct FieldStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single sample
};

struct BenchmarkRow {
    int order = 0;
    std::size_t sentence_count = 0;
    FieldStats level1_rank;
    FieldStats level2_rank;
    FieldStats hit_at_group1;
    FieldStats commands_per_letter;
};

struct SampledSplit {
    std::vector<std::string> sentences;
    std::vector<Corpus> training;
};

/// Picks `n_sentences` contiguous spans, each inside one document.
/// HeldOut: spans never overlap and are cut out of the training text (the
/// pieces around them become separate documents). InCorpus: training text
/// is the whole corpus. Deterministic under `seed`.
/// Throws Error{CorpusTooSmall}.
SampledSplit sample_sentences(std::span<const Corpus> documents, const CharacterSet& cs,
                              const BenchmarkOptions& options);

/// One aggregate row per requested order, in the order given.
std::vector<BenchmarkRow> run_benchmark(std::span<const Corpus> documents, const CharacterSet& cs,
                                        const BenchmarkOptions& options);

/// Aggregates per-sentence reports of a single order.
BenchmarkRow aggregate(int order, std::span<const SimReport> reports);

std::string config_name(int order);

// Text renderings. The CSV is the machine format; the table is for people.
inline constexpr std::string_view kBenchmarkCsvHeader =
    "config,sentence_count,mean_l1_rank,std_l1_rank,mean_l2_rank,hit_at_group1,commands_per_letter";
std::string benchmark_csv(std::span<const BenchmarkRow> rows);
std::vector<BenchmarkRow> parse_benchmark_csv(std::string_view csv);
std::string benchmark_table(std::span<const BenchmarkRow> rows);

inline constexpr std::string_view kSimulationCsvHeader =
    "config,sentence,commands_used,letters_typed,mean_l1_rank,mean_l2_rank,hit_at_group1";
std::string simulation_csv(std::span<const SimReport> reports);
std::string simulation_table(std::span<const SimReport> reports);

}  // namespace flextree
