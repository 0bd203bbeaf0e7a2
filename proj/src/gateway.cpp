#include "flextree/gateway.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>

#include <httplib.h>

#include "flextree/error.hpp"

namespace flextree {

using nlohmann::json;

struct Gateway::Entry {
    Entry(SessionHandle h, const PredModel& model, Clock clock)
        : handle(std::move(h)), session(model, handle.target, std::move(clock)) {}

    SessionHandle handle;
    TypingSession session;
    std::mutex mutex;
};

json metrics_to_json(const MetricsReport& r, bool empty_log) {
    json j = {
        {"letters", r.letters},
        {"commands", r.commands},
        {"duration_s", r.duration_s},
        {"speed_lpm", r.speed_lpm},
        {"itr_com_bpm", r.itr_com_bpm},
        {"itr_letter_bpm", r.itr_letter_bpm},
        {"deletion_s_per_letter", nullptr},
        {"empty", empty_log},
    };
    if (r.deletion_s_per_letter) j["deletion_s_per_letter"] = *r.deletion_s_per_letter;
    return j;
}

json event_to_json(const SessionEvent& e) { return json::parse(to_json_line(e)); }

namespace {

json handle_to_json(const SessionHandle& h) {
    return {
        {"order", h.order},
        {"dwell_ms", h.dwell_ms},
        {"charset", h.charset_id},
        {"target", h.target ? json(*h.target) : json(nullptr)},
    };
}

json live_metrics(const TypingSession& session) {
    const auto& events = session.state().events;
    if (events.empty()) return metrics_to_json(MetricsReport{}, true);
    return metrics_to_json(report_from_log(events));
}

json state_to_json(const SessionHandle& handle, const TypingSession& session) {
    const SessionState& s = session.state();
    return {
        {"session_id", handle.session_id},
        {"created_at", handle.created_at_ms},
        {"config", handle_to_json(handle)},
        {"level", static_cast<int>(s.level)},
        {"layout", layout_to_json(s.current_layout)},
        {"selected_group", s.selected_group ? json(s.selected_group->chars) : json(nullptr)},
        {"text_entered", s.text_entered},
        {"last_five", session.last_five()},
        {"complete", s.target_text ? session.is_complete() : false},
        {"event_count", s.events.size()},
    };
}

}  // namespace

Gateway::Gateway(GatewayConfig config) : config_(std::move(config)) {
    std::random_device rd;
    id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string Gateway::next_session_id() {
    // Counter keeps ids unique for the service lifetime; the salt keeps them
    // unguessable across restarts.
    std::mt19937_64 mix(id_salt_ ^ (++issued_ * 0x9E3779B97F4A7C15ull));
    char buf[48];
    std::snprintf(buf, sizeof buf, "s%llu-%016llx", static_cast<unsigned long long>(issued_),
                  static_cast<unsigned long long>(mix()));
    return buf;
}

json Gateway::create_session(const json& request) {
    if (!request.is_object()) throw Error(ErrorCode::BadRequest, "request body must be an object");

    const auto order_it = request.find("order");
    if (order_it == request.end() || !order_it->is_number_integer()) {
        throw Error(ErrorCode::UnknownOrder, "order must be an integer 0..3");
    }
    const int order = order_it->get<int>();
    const auto model_it = config_.models.find(order);
    if (order < 0 || order > 3 || model_it == config_.models.end()) {
        throw Error(ErrorCode::UnknownOrder, "no model loaded for order " + std::to_string(order));
    }
    const PredModel& model = *model_it->second;

    std::optional<std::string> target;
    if (const auto it = request.find("target"); it != request.end() && !it->is_null()) {
        if (!it->is_string()) throw Error(ErrorCode::MalformedTarget, "target must be a string");
        target = it->get<std::string>();
        if (!is_normalized(*target, model.charset())) {
            throw Error(ErrorCode::MalformedTarget, "target contains characters outside the charset");
        }
    }

    int dwell_ms = config_.default_dwell_ms;
    if (const auto it = request.find("dwell_ms"); it != request.end() && !it->is_null()) {
        if (!it->is_number_integer() || it->get<int>() <= 0) {
            throw Error(ErrorCode::BadRequest, "dwell_ms must be a positive integer");
        }
        dwell_ms = it->get<int>();
    }

    const auto created_at = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::system_clock::now().time_since_epoch())
                                .count();

    std::unique_lock lock(sessions_mutex_);
    SessionHandle handle{next_session_id(), created_at, order, dwell_ms, config_.charset_id, target};
    auto entry = std::make_shared<Entry>(std::move(handle), model, config_.clock);
    const std::string id = entry->handle.session_id;
    sessions_.emplace(id, entry);
    lock.unlock();

    return {
        {"session_id", id},
        {"created_at", created_at},
        {"layout", layout_to_json(entry->session.state().current_layout)},
        {"config", handle_to_json(entry->handle)},
    };
}

std::shared_ptr<Gateway::Entry> Gateway::find(const std::string& session_id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + session_id + "'");
    return it->second;
}

json Gateway::post_command(const std::string& session_id, const json& request) {
    auto entry = find(session_id);
    if (!request.is_object()) throw Error(ErrorCode::BadRequest, "request body must be an object");
    const auto cmd_it = request.find("command_id");
    if (cmd_it == request.end() || !cmd_it->is_number_integer()) {
        throw Error(ErrorCode::BadCommandId, "command_id must be an integer 1..10");
    }
    const CommandId command(cmd_it->get<int>());

    std::lock_guard lock(entry->mutex);
    TypingSession& session = entry->session;
    SessionEvent event = [&] {
        const auto t_it = request.find("t_ms");
        if (t_it == request.end() || t_it->is_null()) return session.apply_command(command);
        if (!t_it->is_number_integer()) throw Error(ErrorCode::BadRequest, "t_ms must be an integer");
        return session.apply_command(command, t_it->get<std::int64_t>());
    }();

    const SessionState& s = session.state();
    return {
        {"event", event_to_json(event)},
        {"layout", layout_to_json(s.current_layout)},
        {"level", static_cast<int>(s.level)},
        {"text_entered", s.text_entered},
        {"last_five", session.last_five()},
        {"complete", s.target_text ? session.is_complete() : false},
        {"metrics_snapshot", live_metrics(session)},
    };
}

json Gateway::get_session(const std::string& session_id) const {
    auto entry = find(session_id);
    std::lock_guard lock(entry->mutex);
    return state_to_json(entry->handle, entry->session);
}

json Gateway::get_metrics(const std::string& session_id) const {
    auto entry = find(session_id);
    std::lock_guard lock(entry->mutex);
    return live_metrics(entry->session);
}

json Gateway::end_session(const std::string& session_id) {
    std::shared_ptr<Entry> entry;
    {
        std::unique_lock lock(sessions_mutex_);
        const auto it = sessions_.find(session_id);
        if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + session_id + "'");
        entry = it->second;
        sessions_.erase(it);
    }
    // Waits for any in-flight command on this session.
    std::lock_guard lock(entry->mutex);
    const auto& events = entry->session.state().events;

    json transcript = json::array();
    for (const SessionEvent& e : events) transcript.push_back(event_to_json(e));
    json out = {
        {"session_id", session_id},
        {"text_entered", entry->session.state().text_entered},
        {"transcript", std::move(transcript)},
        {"metrics", live_metrics(entry->session)},
    };

    if (config_.transcript_dir) {
        const auto path = *config_.transcript_dir / (session_id + ".jsonl");
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw Error(ErrorCode::IoError, "cannot write transcript " + path.string());
        write_transcript(file, events);
        out["transcript_path"] = path.string();
    }
    return out;
}

std::size_t Gateway::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
    send_json(res, status, {{"error", code}, {"message", message}});
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const Error& e) {
            send_error(res, e.code() == ErrorCode::UnknownSession ? 404 : 400, to_string(e.code()), e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, "BadRequest", e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "Internal", e.what());
        }
    };
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    return json::parse(req.body);
}

}  // namespace

void mount_routes(httplib::Server& server, Gateway& gateway) {
    constexpr auto kId = R"(/sessions/([A-Za-z0-9\-]+))";

    server.Get("/healthz", guarded([](const httplib::Request&, httplib::Response& res) {
                   send_json(res, 200, {{"status", "ok"}});
               }));
    server.Post("/sessions", guarded([&gateway](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, 201, gateway.create_session(parse_body(req)));
                }));
    server.Get(kId, guarded([&gateway](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, gateway.get_session(req.matches[1]));
               }));
    server.Post(std::string(kId) + "/command",
                guarded([&gateway](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, 200, gateway.post_command(req.matches[1], parse_body(req)));
                }));
    server.Get(std::string(kId) + "/metrics",
               guarded([&gateway](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, gateway.get_metrics(req.matches[1]));
               }));
    server.Delete(kId, guarded([&gateway](const httplib::Request& req, httplib::Response& res) {
                      send_json(res, 200, gateway.end_session(req.matches[1]));
                  }));
}

}  // namespace flextree
