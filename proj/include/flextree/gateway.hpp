#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "flextree/metrics.hpp"
#include "flextree/ppm_model.hpp"
#include "flextree/session.hpp"

namespace httplib {
class Server;
}

namespace flextree {

inline constexpr int kDefaultDwellMs = 1500;

struct GatewayConfig {
    /// Model per order; every order a client may request must be present.
    std::map<int, std::shared_ptr<const PredModel>> models;
    int default_dwell_ms = kDefaultDwellMs;
    /// end_session writes <dir>/<session_id>.jsonl when set.
    std::optional<std::filesystem::path> transcript_dir;
    std::string charset_id = "default";
    Clock clock = steady_clock_ms();
};

struct SessionHandle {
    std::string session_id;
    std::int64_t created_at_ms;  // unix epoch
    int order;
    int dwell_ms;
    std::string charset_id;
    std::optional<std::string> target;
};

nlohmann::json metrics_to_json(const MetricsReport& report, bool empty_log = false);
nlohmann::json event_to_json(const SessionEvent& event);

/// Session service behind the HTTP API. Every method takes and returns the
/// wire JSON, so the HTTP layer is routing only. Failures throw
/// flextree::Error; UnknownSession maps to 404, the rest to 400.
///
/// Requests to different sessions run in parallel; requests to one session
/// are serialized.
class Gateway {
public:
    explicit Gateway(GatewayConfig config);

    /// {order: 0..3, target?: string, dwell_ms?: int} ->
    /// {session_id, created_at, layout, config}
    nlohmann::json create_session(const nlohmann::json& request);

    /// {command_id: 1..10, t_ms?: int} ->
    /// {event, layout, level, text_entered, last_five, complete, metrics_snapshot}
    nlohmann::json post_command(const std::string& session_id, const nlohmann::json& request);

    nlohmann::json get_session(const std::string& session_id) const;
    nlohmann::json get_metrics(const std::string& session_id) const;

    /// Frees the session and returns {session_id, transcript, metrics[, transcript_path]}.
    nlohmann::json end_session(const std::string& session_id);

    std::size_t session_count() const;

private:
    struct Entry;

    std::shared_ptr<Entry> find(const std::string& session_id) const;
    std::string next_session_id();

    GatewayConfig config_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::uint64_t issued_ = 0;
    std::uint64_t id_salt_;
};

/// Registers the JSON endpoints:
///   POST /sessions, GET /sessions/{id}, POST /sessions/{id}/command,
///   GET /sessions/{id}/metrics, DELETE /sessions/{id}, GET /healthz
/// Error body: {"error": code, "message": text}.
void mount_routes(httplib::Server& server, Gateway& gateway);

}  // namespace flextree
