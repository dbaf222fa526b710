// src/experiments.cpp
#include "elmsim/experiments.hpp"

#include <algorithm>
#include <future>
#include <set>

namespace elmsim {

SimulationConfig preset_pr1() {
    SimulationConfig c;
    c.n = 1;
    c.dt = 0.001;
    c.t_start = -3.0;
    c.t_end = 25.0;
    c.forgetting = {0.002, 1.0, DecayMode::PerStep, 0.001};
    c.effort = {1.0, 1.5, 5.0};
    c.schedule.windows = {{-3.0, 25.0}};
    FixedTimes fixed;
    for (double t : {3.0, 6.0, 9.0, 12.0, 15.0, 18.0}) fixed.accesses.push_back({t, 1});
    c.policy = fixed;
    c.busy = BusyPolicy::SkipTime;
    c.sample_every = 1;
    return c;
}

SimulationConfig preset_pr2(std::uint32_t n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("pr2 requires N >= 1");
    SimulationConfig c;
    c.n = n;
    c.dt = 0.005;
    c.t_start = -3.0;
    c.t_end = 700.0;
    c.forgetting = {0.002, 3.0, DecayMode::PerStep, 0.005};
    c.effort = {1.0, 2.0, 2.0};
    c.schedule.windows = {{50.0, 350.0}};
    c.policy = UniformRandom{};
    c.busy = BusyPolicy::FreezeActive;
    c.sample_every = 1;
    c.seed = seed;
    return c;
}

SimulationConfig preset_pr3(std::uint64_t seed) {
    SimulationConfig c;
    c.n = 30;
    c.dt = 0.003;
    c.t_start = -20.0;
    c.t_end = 1100.0;
    c.forgetting = {0.002, 1.5, DecayMode::PerStep, 0.003};
    c.effort = {1.0, 2.0, 2.0};
    c.schedule.windows = {{0.0, 180.0}, {400.0, 580.0}, {800.0, 980.0}};
    c.policy = UniformRandom{};
    c.busy = BusyPolicy::DecayAll;
    c.sample_every = 2;
    c.seed = seed;
    return c;
}

SimulationConfig preset_by_name(const std::string& name, std::uint32_t n, std::uint64_t seed) {
    if (name == "pr1") return preset_pr1();
    if (name == "pr2") return preset_pr2(n, seed);
    if (name == "pr3") return preset_pr3(seed);
    throw ConfigError("unknown preset '" + name + "' (expected pr1|pr2|pr3)");
}

std::vector<std::string> preset_names() { return {"pr1", "pr2", "pr3"}; }

SimulationConfig sweep_config(std::uint32_t n, const SweepSettings& settings) {
    SimulationConfig c = preset_pr2(n);
    c.policy = RoundRobin{1};
    if (settings.dt) c.dt = *settings.dt;
    if (settings.mode) c.forgetting.mode = *settings.mode;
    c.validate();
    return c;
}

std::vector<SweepRow> sweep_n(const std::vector<std::uint32_t>& n_values, double measure_at,
                              const SweepSettings& settings) {
    if (n_values.empty()) throw ConfigError("sweep needs at least one N");
    const std::set<std::uint32_t> unique(n_values.begin(), n_values.end());

    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(unique.size());
    for (std::uint32_t n : unique) {
        const SimulationConfig cfg = sweep_config(n, settings);
        if (measure_at < cfg.t_start || measure_at > cfg.t_end) {
            throw ConfigError("measure_at must lie within the run interval");
        }
        jobs.push_back(std::async(std::launch::async, [cfg, measure_at] {
            const RunResult result = run(cfg);
            const TrajectorySample& at = metrics_at(result.trajectory, measure_at);
            return SweepRow{cfg.n, at.z_total, at.mean_gamma, at.z_total / cfg.n};
        }));
    }
    std::vector<SweepRow> rows;
    rows.reserve(jobs.size());
    for (auto& job : jobs) rows.push_back(job.get());
    return rows;
}

std::uint32_t find_optimal_n(const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw ConfigError("find_optimal_n: no rows");
    const SweepRow* best = &rows.front();
    for (const auto& row : rows) {
        if (row.z_final > best->z_final || (row.z_final == best->z_final && row.n < best->n)) {
            best = &row;
        }
    }
    return best->n;
}

double information_rate(const SimulationConfig& config) {
    const double total = config.schedule.total_length();
    if (!(total > 0.0)) throw ConfigError("information_rate: schedule has no lesson time");
    return static_cast<double>(config.n) / total;
}

}  // namespace elmsim
