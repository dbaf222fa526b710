// include/elmsim/experiments.hpp
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elmsim/simulator.hpp"

namespace elmsim {

/// Single element used at t = 3, 6, ..., 18; the clock skips each effort interval.
SimulationConfig preset_pr1();

/// N elements, one lesson [50, 350), uniform random access, active element
/// frozen while in use. Runs to t = 700.
SimulationConfig preset_pr2(std::uint32_t n, std::uint64_t seed = 0);

/// 30 elements, three 180-UEV lessons separated by 220-UEV breaks.
SimulationConfig preset_pr3(std::uint64_t seed = 0);

/// Looks up a preset by name ("pr1", "pr2", "pr3"); `n` only applies to pr2.
SimulationConfig preset_by_name(const std::string& name, std::uint32_t n = 10, std::uint64_t seed = 0);

std::vector<std::string> preset_names();

/// Measurement point of the load sweep: end of the pr2 lesson plus 350 UEV.
inline constexpr double kDefaultMeasureAt = 700.0;

struct SweepRow {
    std::uint32_t n = 0;
    double z_final = 0.0;
    double mean_gamma_final = 0.0;
    double k = 0.0;  // z_final / n
};

/// Optional overrides applied on top of the sweep's base configuration.
struct SweepSettings {
    std::optional<double> dt;
    std::optional<DecayMode> mode;
};

/// The pr2 configuration with sequential (round-robin) access, as used by the sweep.
SimulationConfig sweep_config(std::uint32_t n, const SweepSettings& settings = {});

/// Runs sweep_config(N) for every N and measures at `measure_at`.
/// Rows are independent runs executed in parallel; output is sorted by N.
std::vector<SweepRow> sweep_n(const std::vector<std::uint32_t>& n_values,
                              double measure_at = kDefaultMeasureAt,
                              const SweepSettings& settings = {});

/// N with the largest z_final; ties go to the smaller N.
std::uint32_t find_optimal_n(const std::vector<SweepRow>& rows);

/// N divided by the total lesson time, in elements per UEV.
double information_rate(const SimulationConfig& config);

}  // namespace elmsim
