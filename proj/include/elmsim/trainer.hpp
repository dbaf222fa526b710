// include/elmsim/trainer.hpp
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "elmsim/simulator.hpp"

namespace elmsim::trainer {

enum class Visibility { Instructor, Blind };
enum class Status { Running, Finished };

std::string to_string(Visibility v);
std::string to_string(Status s);
Visibility visibility_from_string(const std::string& text);

struct Present {
    std::uint32_t element = 0;
};
struct SetAutoRate {
    double rate = 0.0;  // presentations per UEV, random element each time
};
struct PauseAuto {};
struct Probe {
    std::uint32_t element = 0;
};

using ControlAction = std::variant<Present, SetAutoRate, PauseAuto, Probe>;

struct Control {
    double t = 0.0;  // applied at the first step whose clock reaches t
    ControlAction action;
};

std::string action_name(const ControlAction& action);

/// Per-control result of an advance call.
struct ControlOutcome {
    std::size_t index = 0;
    bool accepted = false;
    std::string reason;               // machine-readable, empty when accepted
    std::optional<double> applied_at;
    std::optional<double> probed_z;   // only for accepted probes
};

/// One entry of the append-only session log.
struct HistoryEntry {
    Control control;
    ControlOutcome outcome;
};

struct Snapshot {
    std::string id;
    Status status = Status::Running;
    Visibility visibility = Visibility::Instructor;
    std::uint32_t n = 0;
    double clock = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    bool in_lesson = false;
    std::optional<double> busy_until;
    std::uint32_t active = 0;
    double auto_rate = 0.0;
    std::vector<std::uint32_t> s;
    std::optional<std::vector<double>> z;  // withheld in Blind mode
    std::optional<double> z_total;         // withheld in Blind mode
    std::vector<ControlOutcome> outcomes;
};

struct ScoreReport {
    double z_total = 0.0;
    double k = 0.0;
    std::vector<std::uint32_t> s;
    Trajectory trajectory;
    std::vector<AccessEvent> accesses;
};

/// Error surfaced to API clients as {code, reason}.
class SessionError : public std::runtime_error {
public:
    SessionError(std::string code, const std::string& reason)
        : std::runtime_error(reason), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/**
 * A live lesson steered by a human teacher.
 *
 * Dynamics come from the same Engine that batch runs use; the only
 * difference is where accesses originate. Every access is logged with the
 * exact clock value it fired at, so replay_config() rebuilds the session as
 * a FixedTimes run that reproduces the trajectory step for step.
 *
 * Simulated time moves only inside advance() and finish(). All public
 * member functions lock the session; reads share the lock.
 */
class Session {
public:
    Session(std::string id, SimulationConfig config, Visibility visibility);

    const std::string& id() const { return id_; }

    /// Steps until the clock reaches clock + duration (to the nearest step;
    /// a SkipTime jump may overshoot) or t_end, applying controls at their
    /// timestamps. Controls must be ordered by time and lie within
    /// [clock, clock + duration].
    Snapshot advance(double duration, const std::vector<Control>& controls);
    Snapshot finish();
    Snapshot state() const;
    Trajectory trajectory() const;
    ScoreReport score() const;
    std::vector<HistoryEntry> history() const;

    /// The session's configuration with a FixedTimes policy built from the
    /// accesses fired so far.
    SimulationConfig replay_config() const;

private:
    Snapshot snapshot_locked() const;
    void step_locked(const std::vector<Control>& controls, std::size_t& next, std::vector<ControlOutcome>& out);
    ControlOutcome apply_locked(const Control& control, std::size_t index, bool& fired);

    std::string id_;
    Visibility visibility_;
    Engine engine_;
    std::mt19937_64 rng_;
    double auto_rate_ = 0.0;
    double next_auto_ = 0.0;
    Status status_ = Status::Running;
    std::vector<HistoryEntry> history_;
    mutable std::shared_mutex mutex_;
};

/// Thread-safe registry of in-memory sessions.
class SessionStore {
public:
    std::shared_ptr<Session> create(SimulationConfig config, Visibility visibility);
    /// Throws SessionError("unknown_session") for ids not in the store.
    std::shared_ptr<Session> get(const std::string& id) const;
    std::size_t size() const;

private:
    std::string new_id();

    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 id_rng_{std::random_device{}()};
};

}  // namespace elmsim::trainer
