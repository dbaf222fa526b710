// include/elmsim/io.hpp
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "elmsim/experiments.hpp"
#include "elmsim/simulator.hpp"

namespace elmsim {

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;

void to_json(nlohmann::json& j, const ForgettingLaw& law);
void to_json(nlohmann::json& j, const EffortLaw& law);
void to_json(nlohmann::json& j, const SelectionPolicy& policy);
void to_json(nlohmann::json& j, const SimulationConfig& config);

/// Parses the config file schema. Missing required keys or wrong types
/// raise ConfigError; the parsed config is validated before returning.
/// `require_policy` is false for trainer sessions, where selection comes
/// from the teacher.
SimulationConfig config_from_json(const nlohmann::json& j, bool require_policy = true);
SelectionPolicy policy_from_json(const nlohmann::json& j);

SimulationConfig load_config_file(const std::filesystem::path& path);

/// 17 significant digits with a '.' decimal separator, independent of locale.
std::string format_number(double value);

std::string trajectory_csv(const Trajectory& trajectory);
std::string per_element_csv(const Trajectory& trajectory);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace elmsim
