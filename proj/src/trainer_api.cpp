// src/trainer_api.cpp
#include "elmsim/trainer_api.hpp"

#include <httplib.h>

#include "elmsim/experiments.hpp"
#include "elmsim/io.hpp"

namespace elmsim::trainer {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json outcome_to_json(const ControlOutcome& o) {
    json j{{"index", o.index}, {"accepted", o.accepted}, {"applied_at", optional_number(o.applied_at)}};
    if (!o.reason.empty()) j["reason"] = o.reason;
    if (o.probed_z) j["z"] = *o.probed_z;
    return j;
}

int status_for(const std::string& code) {
    if (code == "unknown_session") return 404;
    if (code == "hidden") return 403;
    if (code == "session_finished" || code == "session_running") return 409;
    return 400;
}

void send_error(httplib::Response& res, const std::string& code, const std::string& reason) {
    res.status = status_for(code);
    res.set_content(json{{"code", code}, {"reason", reason}}.dump(), "application/json");
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const SessionError& e) {
            send_error(res, e.code(), e.what());
        } catch (const ConfigError& e) {
            send_error(res, "invalid_config", e.what());
        } catch (const json::exception& e) {
            send_error(res, "bad_request", e.what());
        }
    };
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw SessionError("bad_request", std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

json snapshot_to_json(const Snapshot& s) {
    json j{{"id", s.id},
           {"status", to_string(s.status)},
           {"visibility", to_string(s.visibility)},
           {"n", s.n},
           {"clock", s.clock},
           {"t_start", s.t_start},
           {"t_end", s.t_end},
           {"in_lesson", s.in_lesson},
           {"busy_until", optional_number(s.busy_until)},
           {"active", s.active == 0 ? json(nullptr) : json(s.active)},
           {"auto_rate", s.auto_rate},
           {"s", s.s}};
    if (s.z) {
        j["z"] = *s.z;
        j["z_total"] = *s.z_total;
    }
    json outcomes = json::array();
    for (const auto& o : s.outcomes) outcomes.push_back(outcome_to_json(o));
    j["outcomes"] = std::move(outcomes);
    return j;
}

json sample_to_json(const TrajectorySample& s) {
    return json{{"t", s.t},
                {"z_total", s.z_total},
                {"mean_tau", s.mean_tau},
                {"mean_gamma", s.mean_gamma},
                {"active", s.active == 0 ? json(nullptr) : json(s.active)}};
}

json score_to_json(const ScoreReport& r) {
    json samples = json::array();
    for (const auto& s : r.trajectory) samples.push_back(sample_to_json(s));
    json accesses = json::array();
    for (const auto& a : r.accesses) accesses.push_back({{"t", a.t}, {"element", a.element}});
    return json{{"z_total", r.z_total}, {"k", r.k}, {"s", r.s}, {"trajectory", samples}, {"accesses", accesses}};
}

std::vector<Control> controls_from_json(const json& j) {
    std::vector<Control> out;
    if (j.is_null()) return out;
    if (!j.is_array()) throw SessionError("bad_request", "controls must be an array");
    for (const auto& item : j) {
        if (!item.is_object() || !item.contains("t") || !item.contains("type")) {
            throw SessionError("bad_request", "each control needs 't' and 'type'");
        }
        Control c;
        c.t = item.at("t").get<double>();
        const auto type = item.at("type").get<std::string>();
        auto element = [&] {
            if (!item.contains("element") || !item.at("element").is_number_integer())
                throw SessionError("bad_request", type + " needs an integer 'element'");
            const auto e = item.at("element").get<std::int64_t>();
            return e < 0 ? 0u : static_cast<std::uint32_t>(e);
        };
        if (type == "present") {
            c.action = Present{element()};
        } else if (type == "set_auto_rate") {
            if (!item.contains("rate")) throw SessionError("bad_request", "set_auto_rate needs 'rate'");
            c.action = SetAutoRate{item.at("rate").get<double>()};
        } else if (type == "pause_auto") {
            c.action = PauseAuto{};
        } else if (type == "probe") {
            c.action = Probe{element()};
        } else {
            throw SessionError("bad_request", "unknown control type '" + type + "'");
        }
        out.push_back(c);
    }
    return out;
}

SimulationConfig session_config_from_json(const json& body) {
    if (body.contains("config")) return config_from_json(body.at("config"), false);
    if (body.contains("preset")) {
        const auto n = body.value("n", 10u);
        const auto seed = body.value("seed", std::uint64_t{0});
        return preset_by_name(body.at("preset").get<std::string>(), n, seed);
    }
    throw ConfigError("request needs 'config' or 'preset'");
}

void register_routes(httplib::Server& server, SessionStore& store,
                     const std::optional<std::filesystem::path>& static_dir) {
    server.Post("/sessions", guarded([&store](const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        const auto visibility = visibility_from_string(body.value("visibility", std::string("instructor")));
        auto session = store.create(session_config_from_json(body), visibility);
        send_json(res, json{{"id", session->id()}}, 201);
    }));

    server.Post(R"(/sessions/([^/]+)/advance)",
                guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    auto session = store.get(req.matches[1]);
                    const json body = parse_body(req);
                    if (!body.contains("duration") || !body.at("duration").is_number()) {
                        throw SessionError("bad_request", "advance needs numeric 'duration'");
                    }
                    const auto controls = controls_from_json(body.value("controls", json::array()));
                    send_json(res, snapshot_to_json(session->advance(body.at("duration").get<double>(), controls)));
                }));

    server.Get(R"(/sessions/([^/]+)/state)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, snapshot_to_json(store.get(req.matches[1])->state()));
               }));

    server.Get(R"(/sessions/([^/]+)/trajectory)",
               guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   json samples = json::array();
                   for (const auto& s : store.get(req.matches[1])->trajectory()) samples.push_back(sample_to_json(s));
                   send_json(res, json{{"samples", samples}});
               }));

    server.Post(R"(/sessions/([^/]+)/finish)",
                guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, snapshot_to_json(store.get(req.matches[1])->finish()));
                }));

    server.Get(R"(/sessions/([^/]+)/score)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, score_to_json(store.get(req.matches[1])->score()));
               }));

    if (static_dir) server.set_mount_point("/", static_dir->string());
}

}  // namespace elmsim::trainer
