// include/elmsim/trainer_api.hpp
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "elmsim/trainer.hpp"

namespace httplib {
class Server;
}

namespace elmsim::trainer {

// Wire format of the session API. Field names are fixed; see README.

nlohmann::json snapshot_to_json(const Snapshot& snapshot);
nlohmann::json sample_to_json(const TrajectorySample& sample);
nlohmann::json score_to_json(const ScoreReport& report);
std::vector<Control> controls_from_json(const nlohmann::json& j);

/// Builds a session config from a create-request body: either
/// {"config": {...}} in the config-file schema or {"preset": "pr2", "n": 10, "seed": 1}.
SimulationConfig session_config_from_json(const nlohmann::json& body);

/**
 * Registers the session endpoints on `server`:
 *
 *   POST /sessions                  -> 201 {"id"}
 *   POST /sessions/{id}/advance     -> snapshot
 *   GET  /sessions/{id}/state       -> snapshot
 *   GET  /sessions/{id}/trajectory  -> {"samples": [...]}
 *   POST /sessions/{id}/finish      -> snapshot
 *   GET  /sessions/{id}/score       -> report
 *
 * Errors are {"code", "reason"} with 400/403/404/409 status. When
 * `static_dir` is set it is mounted at "/" for the UI bundle.
 */
void register_routes(httplib::Server& server, SessionStore& store,
                     const std::optional<std::filesystem::path>& static_dir = std::nullopt);

}  // namespace elmsim::trainer
