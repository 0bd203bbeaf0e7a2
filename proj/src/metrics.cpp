#include "flextree/metrics.hpp"

#include "flextree/error.hpp"

namespace flextree {

double itr(double actions, int m, double duration_s) {
    if (!(duration_s > 0.0)) throw Error(ErrorCode::ZeroDuration, "ITR needs a positive duration");
    if (m < 2) throw Error(ErrorCode::DegenerateAlphabet, "ITR needs an alphabet of at least 2 symbols");
    return actions * std::log2(static_cast<double>(m)) / (duration_s / 60.0);
}

MetricsReport report_from_counts(std::size_t letters, std::size_t commands, double duration_s, int m_com,
                                 int m_letter) {
    MetricsReport r;
    r.letters = letters;
    r.commands = commands;
    r.duration_s = duration_s;
    if (duration_s > 0.0) {
        r.speed_lpm = static_cast<double>(letters) / (duration_s / 60.0);
        r.itr_com_bpm = itr(static_cast<double>(commands), m_com, duration_s);
        r.itr_letter_bpm = itr(static_cast<double>(letters), m_letter, duration_s);
    }
    return r;
}

MetricsReport report_from_log(std::span<const SessionEvent> events, int m_com, int m_letter) {
    if (events.empty()) throw Error(ErrorCode::EmptyLog, "no events to measure");

    std::size_t letters = 0;
    std::size_t commands = 0;
    std::size_t deletions = 0;
    std::int64_t deletion_ms = 0;
    std::int64_t previous_t = 0;
    for (const SessionEvent& e : events) {
        if (e.kind == EventKind::CharTyped) ++letters;
        if (e.kind != EventKind::NoOp) ++commands;
        if (e.kind == EventKind::Deleted) {
            ++deletions;
            deletion_ms += e.t_ms - previous_t;
        }
        previous_t = e.t_ms;
    }
    const double duration_s = static_cast<double>(events.back().t_ms - events.front().t_ms) / 1000.0;
    MetricsReport r = report_from_counts(letters, commands, duration_s, m_com, m_letter);
    if (deletions > 0) {
        r.deletion_s_per_letter = static_cast<double>(deletion_ms) / 1000.0 / static_cast<double>(deletions);
    }
    return r;
}

}  // namespace flextree
