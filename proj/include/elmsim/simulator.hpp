// include/elmsim/simulator.hpp
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "elmsim/laws.hpp"
#include "elmsim/schedule.hpp"

namespace elmsim {

/// Complete description of one run. Element indices are 1-based.
struct SimulationConfig {
    std::uint32_t n = 1;
    double dt = 0.001;
    double t_start = 0.0;
    double t_end = 1.0;
    ForgettingLaw forgetting;
    EffortLaw effort;
    LessonSchedule schedule;
    SelectionPolicy policy = UniformRandom{};
    BusyPolicy busy = BusyPolicy::DecayAll;
    std::uint32_t sample_every = 1;
    std::uint64_t seed = 0;
    double initial_z = 0.0;          // knowledge level of every element at t_start
    bool record_per_element = false;  // store the Z vector in each sample

    void validate() const;
    std::uint64_t step_count() const;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct TrajectorySample {
    double t = 0.0;
    double z_total = 0.0;
    double mean_tau = 0.0;
    double mean_gamma = 0.0;
    std::uint32_t active = 0;  // 0 when the learner is free
    std::vector<double> per_element_z;
};

using Trajectory = std::vector<TrajectorySample>;

struct AccessEvent {
    double t = 0.0;
    std::uint32_t element = 0;
    double z_before = 0.0;
    double effort = 0.0;
};

struct RunResult {
    Trajectory trajectory;
    std::vector<ElementState> final_states;
    std::vector<AccessEvent> accesses;
};

/**
 * @brief Fixed-step integrator shared by batch runs and trainer sessions.
 *
 * A step is driven in three calls so that callers can decide which element
 * (if any) is used in between:
 *
 *     engine.begin_step();              // clock += dt
 *     if (engine.can_access()) engine.fire(e);
 *     engine.end_step();                // decay, maybe record a sample
 *
 * Access is evaluated before decay within a step. Outside lesson windows
 * and while free, every element decays. While busy the BusyPolicy decides
 * whether the active element decays; under SkipTime fire() jumps the clock
 * over the whole effort interval instead and the learner is never busy.
 */
class Engine {
public:
    explicit Engine(SimulationConfig config);

    double time() const { return t_start_ + static_cast<double>(steps_) * dt_ + jumped_; }
    std::uint64_t steps() const { return steps_; }
    bool finished() const { return time() >= config_.t_end; }

    bool busy() const { return active_ != 0 && time() < busy_until_; }
    std::optional<double> busy_until() const;
    std::uint32_t active() const { return busy() ? active_ : 0; }
    bool in_lesson() const { return elmsim::in_lesson(time(), config_.schedule); }
    bool can_access() const { return !busy() && in_lesson(); }

    void begin_step();
    /// Uses element `element` (1-based) at the current clock. The caller
    /// checks can_access() first; fire() throws ConfigError otherwise.
    void fire(std::uint32_t element);
    void end_step();

    const SimulationConfig& config() const { return config_; }
    const std::vector<ElementState>& states() const { return states_; }
    const Trajectory& trajectory() const { return trajectory_; }
    const std::vector<AccessEvent>& accesses() const { return accesses_; }
    TrajectorySample snapshot() const;

    RunResult take_result() &&;

private:
    void record();

    SimulationConfig config_;
    BusyRule rule_;
    double t_start_;
    double dt_;
    std::uint64_t steps_ = 0;
    double jumped_ = 0.0;
    double busy_until_ = 0.0;
    std::uint32_t active_ = 0;
    std::vector<ElementState> states_;
    std::vector<double> factors_;  // cached per-element decay factor
    Trajectory trajectory_;
    std::vector<AccessEvent> accesses_;
};

/// Runs the configured policy from t_start until the clock reaches t_end.
RunResult run(const SimulationConfig& config);

/// Sample at the greatest recorded time <= t. Throws std::out_of_range
/// when t precedes the first sample.
const TrajectorySample& metrics_at(const Trajectory& trajectory, double t);

}  // namespace elmsim
