// src/io.cpp
#include "elmsim/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace elmsim {

using nlohmann::json;

void to_json(json& j, const ForgettingLaw& law) {
    j = json{{"gamma0", law.gamma0},
             {"beta", law.beta},
             {"mode", to_string(law.mode)},
             {"dt_ref", law.dt_ref}};
}

void to_json(json& j, const EffortLaw& law) {
    j = json{{"tau_inf", law.tau_inf}, {"a", law.a}, {"b", law.b}};
}

void to_json(json& j, const SelectionPolicy& policy) {
    j = json{{"kind", policy_name(policy)}};
    if (const auto* fixed = std::get_if<FixedTimes>(&policy)) {
        json list = json::array();
        for (const auto& a : fixed->accesses) list.push_back({{"time", a.time}, {"element", a.element}});
        j["accesses"] = std::move(list);
    } else if (const auto* rr = std::get_if<RoundRobin>(&policy)) {
        j["start"] = rr->start;
    }
}

void to_json(json& j, const SimulationConfig& c) {
    json windows = json::array();
    for (const auto& w : c.schedule.windows) windows.push_back({{"start", w.start}, {"end", w.end}});
    j = json{{"format_version", kFormatVersion},
             {"n", c.n},
             {"dt", c.dt},
             {"t_start", c.t_start},
             {"t_end", c.t_end},
             {"forgetting", c.forgetting},
             {"effort", c.effort},
             {"schedule", {{"windows", windows}}},
             {"policy", c.policy},
             {"busy", to_string(c.busy)},
             {"sample_every", c.sample_every},
             {"seed", c.seed},
             {"initial_z", c.initial_z},
             {"record_per_element", c.record_per_element}};
}

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    return j.at(key);
}

template <typename T>
T get(const json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return get<T>(j, key);
}

double get_number(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

std::uint32_t get_count(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
        v.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
        throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint32_t>();
}

}  // namespace

SelectionPolicy policy_from_json(const json& j) {
    const auto kind = get<std::string>(j, "kind");
    if (kind == "uniform_random") return UniformRandom{};
    if (kind == "round_robin") return RoundRobin{j.contains("start") ? get_count(j, "start") : 1u};
    if (kind == "fixed_times") {
        FixedTimes fixed;
        const json& list = field(j, "accesses");
        if (!list.is_array()) throw ConfigError("policy.accesses must be an array");
        for (const auto& item : list) {
            fixed.accesses.push_back({get_number(item, "time"), get_count(item, "element")});
        }
        return fixed;
    }
    throw ConfigError("unknown policy kind '" + kind + "'");
}

SimulationConfig config_from_json(const json& j, bool require_policy) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (j.contains("format_version") && get<int>(j, "format_version") != kFormatVersion) {
        throw ConfigError("unsupported format_version");
    }
    SimulationConfig c;
    c.n = get_count(j, "n");
    c.dt = get_number(j, "dt");
    c.t_start = get_number(j, "t_start");
    c.t_end = get_number(j, "t_end");

    const json& f = field(j, "forgetting");
    c.forgetting.gamma0 = get_number(f, "gamma0");
    c.forgetting.beta = get_number(f, "beta");
    c.forgetting.mode = decay_mode_from_string(get_or<std::string>(f, "mode", "perstep"));
    c.forgetting.dt_ref = f.contains("dt_ref") ? get_number(f, "dt_ref") : c.dt;

    const json& e = field(j, "effort");
    c.effort = {get_number(e, "tau_inf"), get_number(e, "a"), get_number(e, "b")};

    if (j.contains("schedule")) {
        const json& windows = field(field(j, "schedule"), "windows");
        if (!windows.is_array()) throw ConfigError("schedule.windows must be an array");
        for (const auto& w : windows) c.schedule.windows.push_back({get_number(w, "start"), get_number(w, "end")});
    }
    if (j.contains("policy")) {
        c.policy = policy_from_json(j.at("policy"));
    } else if (require_policy) {
        throw ConfigError("missing key 'policy'");
    }
    c.busy = busy_policy_from_string(get<std::string>(j, "busy"));
    if (j.contains("sample_every")) c.sample_every = get_count(j, "sample_every");
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (j.contains("initial_z")) c.initial_z = get_number(j, "initial_z");
    c.record_per_element = get_or<bool>(j, "record_per_element", false);
    c.validate();
    return c;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SimulationConfig load_config_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

std::string format_number(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::string out = "t,Z_total,mean_tau,mean_gamma,active\n";
    out.reserve(trajectory.size() * 96);
    for (const auto& s : trajectory) {
        out += format_number(s.t);
        out += ',';
        out += format_number(s.z_total);
        out += ',';
        out += format_number(s.mean_tau);
        out += ',';
        out += format_number(s.mean_gamma);
        out += ',';
        out += std::to_string(s.active);
        out += '\n';
    }
    return out;
}

std::string per_element_csv(const Trajectory& trajectory) {
    std::string out = "t";
    const std::size_t n = trajectory.empty() ? 0 : trajectory.front().per_element_z.size();
    for (std::size_t i = 1; i <= n; ++i) out += ",Z_" + std::to_string(i);
    out += '\n';
    for (const auto& s : trajectory) {
        out += format_number(s.t);
        for (double z : s.per_element_z) {
            out += ',';
            out += format_number(z);
        }
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "N,Z_final,mean_gamma_final,K\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + ',' + format_number(r.z_final) + ',' +
               format_number(r.mean_gamma_final) + ',' + format_number(r.k) + '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

}  // namespace elmsim
