// src/simulator.cpp
#include "elmsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elmsim {

void SimulationConfig::validate() const {
    if (n < 1) throw ConfigError("N must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be > 0");
    if (!(t_start < t_end)) throw ConfigError("t_start must be < t_end");
    if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
    if (!(initial_z >= 0.0 && initial_z <= 1.0)) throw ConfigError("initial_z must lie in [0, 1]");
    forgetting.validate();
    effort.validate();
    schedule.validate();
    validate_policy(policy, n);
    if (forgetting.mode == DecayMode::ContinuousRate) {
        // gamma is largest at s = 0, so this bounds every later step too.
        (void)decay_factor(0, forgetting, dt);
    }
}

std::uint64_t SimulationConfig::step_count() const {
    return static_cast<std::uint64_t>(std::ceil((t_end - t_start) / dt));
}

Engine::Engine(SimulationConfig config)
    : config_(std::move(config)),
      rule_(busy_elapse(config_.busy)),
      t_start_(config_.t_start),
      dt_(config_.dt) {
    config_.validate();
    states_.assign(config_.n, ElementState{0, config_.initial_z});
    factors_.assign(config_.n, decay_factor(0, config_.forgetting, dt_));
    trajectory_.reserve(config_.step_count() / config_.sample_every + 2);
    record();
}

std::optional<double> Engine::busy_until() const {
    if (!busy()) return std::nullopt;
    return busy_until_;
}

void Engine::begin_step() {
    ++steps_;
    if (active_ != 0 && time() >= busy_until_) active_ = 0;
}

void Engine::fire(std::uint32_t element) {
    if (element < 1 || element > config_.n) {
        throw ConfigError("element " + std::to_string(element) + " outside [1, N]");
    }
    if (!can_access()) throw ConfigError("learner cannot take an element now");
    auto& st = states_[element - 1];
    const double z_before = st.z;
    auto [next, effort] = elmsim::access(st, config_.effort);
    st = next;
    factors_[element - 1] = decay_factor(st.s, config_.forgetting, dt_);
    accesses_.push_back({time(), element, z_before, effort});
    if (rule_.jump_clock) {
        jumped_ += effort;
    } else {
        busy_until_ = time() + effort;
        active_ = element;
    }
}

void Engine::end_step() {
    const std::uint32_t active = this->active();
    for (std::uint32_t i = 0; i < config_.n; ++i) {
        const bool is_active = active == i + 1;
        if (is_active && !rule_.decay_active) continue;
        states_[i].z = std::clamp(states_[i].z * factors_[i], 0.0, 1.0);
    }
    if (steps_ % config_.sample_every == 0) record();
}

TrajectorySample Engine::snapshot() const {
    TrajectorySample sample;
    sample.t = time();
    sample.active = active();
    double tau_sum = 0.0;
    double gamma_sum = 0.0;
    for (const auto& st : states_) {
        sample.z_total += st.z;
        tau_sum += tau_of(st.s, config_.effort);
        gamma_sum += gamma_of(st.s, config_.forgetting);
    }
    const auto n = static_cast<double>(config_.n);
    // Averages cannot exceed the s = 0 values; min() only absorbs summation rounding.
    sample.mean_tau = std::min(tau_sum / n, tau_of(0, config_.effort));
    sample.mean_gamma = std::min(gamma_sum / n, gamma_of(0, config_.forgetting));
    if (config_.record_per_element) {
        sample.per_element_z.reserve(states_.size());
        for (const auto& st : states_) sample.per_element_z.push_back(st.z);
    }
    return sample;
}

void Engine::record() { trajectory_.push_back(snapshot()); }

RunResult Engine::take_result() && {
    return {std::move(trajectory_), std::move(states_), std::move(accesses_)};
}

RunResult run(const SimulationConfig& config) {
    Engine engine(config);
    Selector selector(config.policy, config.n, config.seed);
    while (!engine.finished()) {
        engine.begin_step();
        if (engine.can_access()) {
            const Selection sel = selector.next_element(engine.time());
            if (sel.kind == Selection::Kind::Element) engine.fire(sel.element);
        }
        engine.end_step();
    }
    return std::move(engine).take_result();
}

const TrajectorySample& metrics_at(const Trajectory& trajectory, double t) {
    auto it = std::upper_bound(trajectory.begin(), trajectory.end(), t,
                               [](double value, const TrajectorySample& s) { return value < s.t; });
    if (it == trajectory.begin()) throw std::out_of_range("metrics_at: time precedes first sample");
    return *std::prev(it);
}

}  // namespace elmsim
