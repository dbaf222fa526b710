// tools/elmsim_cli.cpp
//
// Command-line front end: run presets or config files, sweep the element
// count, list presets, serve trainer sessions over HTTP.

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "elmsim/experiments.hpp"
#include "elmsim/io.hpp"
#include "elmsim/svg_plot.hpp"
#include "elmsim/trainer_api.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace elmsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;

struct BadArgs : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::string preset;
    std::string config_path;
    std::uint32_t n = 10;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::string mode;
    std::string out = "out";
    bool plot = false;
    bool per_element = false;
};

struct SweepOptions {
    std::string range = "3..21";
    double measure_at = kDefaultMeasureAt;
    std::optional<double> dt;
    std::string mode;
    std::string out = "out";
    bool plot = false;
};

void apply_overrides(SimulationConfig& c, const std::optional<double>& dt, const std::string& mode) {
    if (dt) c.dt = *dt;
    if (!mode.empty()) c.forgetting.mode = decay_mode_from_string(mode);
    c.validate();
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
    return fs::path(dir);
}

void write_manifest(const fs::path& dir, const json& config, const std::vector<std::string>& outputs,
                    const json& extra = json::object()) {
    json manifest{{"format_version", kFormatVersion}, {"config", config}, {"outputs", outputs}};
    manifest.update(extra);
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

plot::Figure trajectory_figure(const std::string& name, const SimulationConfig& c, const RunResult& r) {
    plot::Figure fig;
    fig.title = "Knowledge over time (" + name + ", N=" + std::to_string(c.n) + ")";
    fig.x_label = "t, UEV";
    plot::Series z{"Z total", {}, false};
    plot::Series tau{"mean tau, UEV", {}, false};
    plot::Series gamma{"mean gamma", {}, false};
    for (const auto& s : r.trajectory) {
        z.points.emplace_back(s.t, s.z_total);
        tau.points.emplace_back(s.t, s.mean_tau);
        gamma.points.emplace_back(s.t, s.mean_gamma);
    }
    fig.panels.push_back({"knowledge Z", {z}, false});
    if (c.n > 1) {
        fig.panels.push_back({"tau, UEV", {tau}, false});
        fig.panels.push_back({"gamma", {gamma}, true});
    }
    return fig;
}

int cmd_run(const RunOptions& opt) {
    SimulationConfig config;
    std::string name;
    if (!opt.preset.empty()) {
        try {
            config = preset_by_name(opt.preset, opt.n, opt.seed.value_or(0));
        } catch (const ConfigError& e) {
            throw BadArgs(e.what());
        }
        name = opt.preset;
    } else if (!opt.config_path.empty()) {
        try {
            config = load_config_file(opt.config_path);
        } catch (const IoError& e) {
            throw ConfigError(e.what());
        }
        if (opt.seed) config.seed = *opt.seed;
        name = fs::path(opt.config_path).stem().string();
    } else {
        throw BadArgs("run needs --preset or --config");
    }
    if (opt.per_element) config.record_per_element = true;
    apply_overrides(config, opt.dt, opt.mode);

    const RunResult result = run(config);
    const fs::path dir = prepare_out_dir(opt.out);
    std::vector<std::string> outputs;
    auto emit = [&](const std::string& file, const std::string& content) {
        write_file_atomic(dir / file, content);
        outputs.push_back((dir / file).string());
    };
    emit("trajectory.csv", trajectory_csv(result.trajectory));
    if (opt.per_element) emit("per_element.csv", per_element_csv(result.trajectory));
    if (opt.plot) emit(name + ".svg", plot::render_svg(trajectory_figure(name, config, result)));
    emit("config.json", json(config).dump(2) + "\n");
    write_manifest(dir, config, outputs);

    const auto& last = result.trajectory.back();
    std::printf("%s: %zu accesses, Z_total(t=%.3f) = %.6f\n", name.c_str(), result.accesses.size(), last.t,
                last.z_total);
    return kExitOk;
}

std::vector<std::uint32_t> parse_range(const std::string& text) {
    std::uint32_t lo = 0, hi = 0;
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            lo = hi = static_cast<std::uint32_t>(std::stoul(text, &used));
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
            lo = static_cast<std::uint32_t>(std::stoul(a, &used));
            if (used != a.size()) throw std::invalid_argument(text);
            hi = static_cast<std::uint32_t>(std::stoul(b, &used));
            if (used != b.size()) throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw BadArgs("--n expects A..B or a single count, got '" + text + "'");
    }
    if (lo < 1 || hi < lo) throw BadArgs("empty range '" + text + "'");
    std::vector<std::uint32_t> out;
    for (std::uint32_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
}

int cmd_sweep(const SweepOptions& opt) {
    const auto ns = parse_range(opt.range);
    SweepSettings settings;
    settings.dt = opt.dt;
    if (!opt.mode.empty()) settings.mode = decay_mode_from_string(opt.mode);
    const auto rows = sweep_n(ns, opt.measure_at, settings);
    const std::uint32_t best = find_optimal_n(rows);

    const fs::path dir = prepare_out_dir(opt.out);
    std::vector<std::string> outputs;
    write_file_atomic(dir / "sweep.csv", sweep_csv(rows));
    outputs.push_back((dir / "sweep.csv").string());
    if (opt.plot) {
        plot::Figure fig{"Retained knowledge vs element count (t = " + format_number(opt.measure_at) + ")",
                         "N, elements per lesson",
                         {}};
        plot::Series z{"Z at measurement", {}, true}, k{"K = Z/N", {}, true}, g{"mean gamma", {}, true};
        for (const auto& r : rows) {
            z.points.emplace_back(r.n, r.z_final);
            k.points.emplace_back(r.n, r.k);
            g.points.emplace_back(r.n, r.mean_gamma_final);
        }
        fig.panels = {{"Z", {z}, false}, {"K", {k}, false}, {"gamma", {g}, true}};
        write_file_atomic(dir / "sweep.svg", plot::render_svg(fig));
        outputs.push_back((dir / "sweep.svg").string());
    }
    SimulationConfig base = sweep_config(ns.front());
    apply_overrides(base, opt.dt, opt.mode);
    write_manifest(dir, base, outputs,
                   json{{"sweep", {{"n_values", ns}, {"measure_at", opt.measure_at}, {"optimal_n", best}}}});

    std::cout << sweep_csv(rows);
    std::printf("optimal N: %u\n", best);
    return kExitOk;
}

int cmd_presets(const std::string& dump) {
    if (!dump.empty()) {
        SimulationConfig c;
        try {
            c = preset_by_name(dump);
        } catch (const ConfigError& e) {
            throw BadArgs(e.what());
        }
        std::cout << json(c).dump(2) << "\n";
        return kExitOk;
    }
    std::puts("pr1  one element used at t = 3,6,...,18; clock skips effort time");
    std::puts("pr2  N elements (--n), one lesson [50,350), random access, active element frozen");
    std::puts("pr3  30 elements, lessons [0,180) [400,580) [800,980), random access, all decay");
    return kExitOk;
}

int cmd_serve(const std::string& host, int port, const std::string& static_dir) {
    httplib::Server server;
    trainer::SessionStore store;
    std::optional<fs::path> mount;
    if (!static_dir.empty()) {
        if (!fs::is_directory(static_dir)) throw IoError("static directory not found: " + static_dir);
        mount = static_dir;
    }
    trainer::register_routes(server, store, mount);
    std::printf("trainer service listening on http://%s:%d\n", host.c_str(), port);
    std::fflush(stdout);
    if (!server.listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning process simulator with use-dependent forgetting"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "Run a preset or a config file");
    auto* preset_opt = run_cmd->add_option("--preset", run_opt.preset, "pr1 | pr2 | pr3");
    auto* config_opt = run_cmd->add_option("--config", run_opt.config_path, "JSON config file");
    preset_opt->excludes(config_opt);
    run_cmd->add_option("--n", run_opt.n, "element count (pr2)");
    run_cmd->add_option("--seed", run_opt.seed, "random seed");
    run_cmd->add_option("--dt", run_opt.dt, "integration step, UEV");
    run_cmd->add_option("--mode", run_opt.mode, "perstep | continuous")->check(CLI::IsMember({"perstep", "continuous"}));
    run_cmd->add_option("--out", run_opt.out, "output directory");
    run_cmd->add_flag("--plot", run_opt.plot, "write an SVG plot");
    run_cmd->add_flag("--per-element", run_opt.per_element, "write per-element knowledge CSV");

    SweepOptions sweep_opt;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the element count with sequential access");
    sweep_cmd->add_option("--n", sweep_opt.range, "range A..B");
    sweep_cmd->add_option("--measure-at", sweep_opt.measure_at, "measurement time, UEV");
    sweep_cmd->add_option("--dt", sweep_opt.dt, "integration step, UEV");
    sweep_cmd->add_option("--mode", sweep_opt.mode, "perstep | continuous")->check(CLI::IsMember({"perstep", "continuous"}));
    sweep_cmd->add_option("--out", sweep_opt.out, "output directory");
    sweep_cmd->add_flag("--plot", sweep_opt.plot, "write an SVG plot");

    std::string dump;
    auto* presets_cmd = app.add_subcommand("presets", "List presets");
    presets_cmd->add_option("--dump", dump, "print the named preset as a config file");

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    auto* serve_cmd = app.add_subcommand("serve", "Serve trainer sessions over HTTP");
    serve_cmd->add_option("--host", host);
    serve_cmd->add_option("--port", port);
    serve_cmd->add_option("--static", static_dir, "directory served at / (UI bundle)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadArgs;
    }

    try {
        if (*run_cmd) return cmd_run(run_opt);
        if (*sweep_cmd) return cmd_sweep(sweep_opt);
        if (*presets_cmd) return cmd_presets(dump);
        if (*serve_cmd) return cmd_serve(host, port, static_dir);
    } catch (const BadArgs& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadArgs;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    }
    return kExitBadArgs;
}
