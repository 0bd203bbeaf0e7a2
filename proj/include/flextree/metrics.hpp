#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "flextree/session.hpp"

namespace flextree {

inline constexpr int kCommandAlphabet = 10;
inline constexpr int kLetterAlphabet = 72;

/// Bits per minute for `actions` equiprobable, error-free selections from an
/// alphabet of `m` over `duration_s` seconds: actions * log2(m) / minutes.
/// Throws Error{ZeroDuration} for duration_s <= 0, Error{DegenerateAlphabet}
/// for m < 2.
double itr(double actions, int m, double duration_s);

struct MetricsReport {
    std::size_t letters = 0;
    std::size_t commands = 0;
    double duration_s = 0.0;
    double speed_lpm = 0.0;
    double itr_com_bpm = 0.0;
    double itr_letter_bpm = 0.0;
    std::optional<double> deletion_s_per_letter;
};

/// Metrics from raw counts. A zero duration yields zero rates.
MetricsReport report_from_counts(std::size_t letters, std::size_t commands, double duration_s,
                                 int m_com = kCommandAlphabet, int m_letter = kLetterAlphabet);

/// letters = CharTyped events, commands = every non-NoOp event, duration from
/// the first to the last timestamp. Deletion time is the mean gap between a
/// Deleted event and the event before it (session start for the first one).
/// Throws Error{EmptyLog}.
MetricsReport report_from_log(std::span<const SessionEvent> events, int m_com = kCommandAlphabet,
                              int m_letter = kLetterAlphabet);

/// ITR_com / ITR_letter for a session that spends exactly two commands per
/// letter: 2*log2(10)/log2(72).
inline double error_free_itr_ratio() { return 2.0 * std::log2(10.0) / std::log2(72.0); }

}  // namespace flextree
