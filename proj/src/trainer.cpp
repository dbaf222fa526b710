// src/trainer.cpp
#include "elmsim/trainer.hpp"

#include <cmath>
#include <cstdio>

namespace elmsim::trainer {

std::string to_string(Visibility v) { return v == Visibility::Blind ? "blind" : "instructor"; }
std::string to_string(Status s) { return s == Status::Finished ? "finished" : "running"; }

Visibility visibility_from_string(const std::string& text) {
    if (text == "blind") return Visibility::Blind;
    if (text == "instructor") return Visibility::Instructor;
    throw ConfigError("visibility must be 'blind' or 'instructor'");
}

std::string action_name(const ControlAction& action) {
    struct V {
        std::string operator()(const Present&) const { return "present"; }
        std::string operator()(const SetAutoRate&) const { return "set_auto_rate"; }
        std::string operator()(const PauseAuto&) const { return "pause_auto"; }
        std::string operator()(const Probe&) const { return "probe"; }
    };
    return std::visit(V{}, action);
}

namespace {

SimulationConfig strip_policy(SimulationConfig config) {
    // Selection comes from controls; an empty fixed list never fires.
    config.policy = FixedTimes{};
    return config;
}

}  // namespace

Session::Session(std::string id, SimulationConfig config, Visibility visibility)
    : id_(std::move(id)),
      visibility_(visibility),
      engine_(strip_policy(std::move(config))),
      rng_(engine_.config().seed) {}

ControlOutcome Session::apply_locked(const Control& control, std::size_t index, bool& fired) {
    ControlOutcome out;
    out.index = index;
    const double t = engine_.time();
    const std::uint32_t n = engine_.config().n;
    auto reject = [&](const char* reason) {
        out.reason = reason;
        return out;
    };

    if (const auto* p = std::get_if<Present>(&control.action)) {
        if (p->element < 1 || p->element > n) return reject("bad_element");
        if (fired) return reject("one_access_per_step");
        if (engine_.busy()) return reject("busy");
        if (!engine_.in_lesson()) return reject("outside_lesson");
        engine_.fire(p->element);
        fired = true;
    } else if (const auto* r = std::get_if<SetAutoRate>(&control.action)) {
        if (!(r->rate >= 0.0) || !std::isfinite(r->rate)) return reject("bad_rate");
        auto_rate_ = r->rate;
        next_auto_ = t;
    } else if (std::holds_alternative<PauseAuto>(control.action)) {
        auto_rate_ = 0.0;
    } else if (const auto* q = std::get_if<Probe>(&control.action)) {
        if (visibility_ != Visibility::Blind) return reject("probe_requires_blind");
        if (q->element < 1 || q->element > n) return reject("bad_element");
        out.probed_z = engine_.states()[q->element - 1].z;
    }
    out.accepted = true;
    out.applied_at = t;
    return out;
}

void Session::step_locked(const std::vector<Control>& controls, std::size_t& next,
                          std::vector<ControlOutcome>& out) {
    engine_.begin_step();
    const double t = engine_.time();
    const double slack = engine_.config().dt * 1e-9;
    bool fired = false;
    while (next < controls.size() && controls[next].t <= t + slack) {
        ControlOutcome outcome = apply_locked(controls[next], next, fired);
        history_.push_back({controls[next], outcome});
        out.push_back(std::move(outcome));
        ++next;
    }
    if (auto_rate_ > 0.0 && !fired && t + slack >= next_auto_ && engine_.can_access()) {
        const auto e = static_cast<std::uint32_t>(uniform_below(rng_, engine_.config().n)) + 1;
        engine_.fire(e);
        next_auto_ = t + 1.0 / auto_rate_;
    }
    engine_.end_step();
}

Snapshot Session::advance(double duration, const std::vector<Control>& controls) {
    std::unique_lock lock(mutex_);
    if (status_ == Status::Finished) throw SessionError("session_finished", "session already finished");
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw SessionError("bad_request", "duration must be >= 0");
    const double clock = engine_.time();
    const double slack = engine_.config().dt * 1e-9;
    for (std::size_t i = 0; i < controls.size(); ++i) {
        const double t = controls[i].t;
        if (!(t >= clock - slack && t <= clock + duration + slack)) {
            throw SessionError("bad_request", "control " + std::to_string(i) + " timestamp outside [clock, clock+duration]");
        }
        if (i > 0 && t < controls[i - 1].t) throw SessionError("bad_request", "controls must be ordered by time");
    }

    // Half a step of slack keeps on-grid targets from taking an extra step.
    const double target = clock + duration - 0.5 * engine_.config().dt;
    std::vector<ControlOutcome> outcomes;
    std::size_t next = 0;
    while (engine_.time() < target && !engine_.finished()) step_locked(controls, next, outcomes);
    // Controls still pending (clock hit t_end first, or rounding) are reported, not dropped.
    for (; next < controls.size(); ++next) {
        ControlOutcome o;
        o.index = next;
        o.reason = "deadline_reached";
        history_.push_back({controls[next], o});
        outcomes.push_back(std::move(o));
    }
    if (engine_.finished()) status_ = Status::Finished;
    Snapshot snap = snapshot_locked();
    snap.outcomes = std::move(outcomes);
    return snap;
}

Snapshot Session::finish() {
    std::unique_lock lock(mutex_);
    std::vector<ControlOutcome> none;
    std::size_t next = 0;
    while (!engine_.finished()) step_locked({}, next, none);
    status_ = Status::Finished;
    return snapshot_locked();
}

Snapshot Session::snapshot_locked() const {
    Snapshot s;
    s.id = id_;
    s.status = status_;
    s.visibility = visibility_;
    s.n = engine_.config().n;
    s.clock = engine_.time();
    s.t_start = engine_.config().t_start;
    s.t_end = engine_.config().t_end;
    s.in_lesson = engine_.in_lesson();
    s.busy_until = engine_.busy_until();
    s.active = engine_.active();
    s.auto_rate = auto_rate_;
    std::vector<double> z;
    double total = 0.0;
    for (const auto& st : engine_.states()) {
        s.s.push_back(st.s);
        z.push_back(st.z);
        total += st.z;
    }
    if (visibility_ == Visibility::Instructor) {
        s.z = std::move(z);
        s.z_total = total;
    }
    return s;
}

Snapshot Session::state() const {
    std::shared_lock lock(mutex_);
    return snapshot_locked();
}

Trajectory Session::trajectory() const {
    std::shared_lock lock(mutex_);
    if (visibility_ == Visibility::Blind && status_ != Status::Finished) {
        throw SessionError("hidden", "trajectory is hidden until a blind session finishes");
    }
    return engine_.trajectory();
}

ScoreReport Session::score() const {
    std::shared_lock lock(mutex_);
    if (status_ != Status::Finished) throw SessionError("session_running", "session has not finished");
    ScoreReport r;
    for (const auto& st : engine_.states()) {
        r.z_total += st.z;
        r.s.push_back(st.s);
    }
    r.k = r.z_total / engine_.config().n;
    r.trajectory = engine_.trajectory();
    r.accesses = engine_.accesses();
    return r;
}

std::vector<HistoryEntry> Session::history() const {
    std::shared_lock lock(mutex_);
    return history_;
}

SimulationConfig Session::replay_config() const {
    std::shared_lock lock(mutex_);
    SimulationConfig c = engine_.config();
    FixedTimes fixed;
    for (const auto& a : engine_.accesses()) fixed.accesses.push_back({a.t, a.element});
    c.policy = std::move(fixed);
    return c;
}

std::shared_ptr<Session> SessionStore::create(SimulationConfig config, Visibility visibility) {
    std::unique_lock lock(mutex_);
    std::string id;
    do {
        id = new_id();
    } while (sessions_.contains(id));
    auto session = std::make_shared<Session>(id, std::move(config), visibility);
    sessions_.emplace(id, session);
    return session;
}

std::shared_ptr<Session> SessionStore::get(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionError("unknown_session", "no session '" + id + "'");
    return it->second;
}

std::size_t SessionStore::size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
}

std::string SessionStore::new_id() {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id_rng_()));
    return buf;
}

}  // namespace elmsim::trainer
