// isingem: analyse, sweep, draw, sample and validate ε-machines of 1D spin chains.
//
// Exit status: 0 success, 1 usage or configuration error, 2 numerical or validation failure.

#include "isingem/config.hpp"
#include "isingem/emachine.hpp"
#include "isingem/errors.hpp"
#include "isingem/oracle.hpp"
#include "isingem/report.hpp"
#include "isingem/sweep.hpp"
#include "isingem/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using namespace isingem;
using nlohmann::json;

namespace {

struct Common {
    std::string config_path;
    std::string preset;
    std::vector<std::string> params;
    bool ground_state = false;
    bool nats = false;
    std::string output;
    std::size_t threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", c.preset, "nn, nnn or pbrw (overrides the config's model)");
    cmd->add_option("-p,--param", c.params, "parameter override, name=value (repeatable)");
    cmd->add_flag("--ground-state", c.ground_state, "evaluate in the zero-temperature limit");
    cmd->add_flag("--nats", c.nats, "report entropies in nats instead of bits");
    cmd->add_option("-o,--output", c.output, "output file (default stdout)");
    cmd->add_option("--threads", c.threads, "OpenMP threads for parallel kernels");
}

RunConfig resolve(const Common& c) {
    RunConfig cfg = c.config_path.empty() ? parse_config(json::object()) : load_config(c.config_path);
    if (!c.preset.empty()) {
        const Preset p = parse_preset(c.preset);
        if (p == Preset::Custom) throw Error(ErrorKind::Config, "--preset: custom models need a config file");
        if (p != cfg.model.preset) {
            cfg.model = ModelSpec{};
            cfg.model.preset = p;
            cfg.parameters.clear();
            cfg.sweep.reset();
        }
    }
    apply_parameter_overrides(cfg, c.params);
    if (c.ground_state) cfg.ground_state = true;
    if (c.nats) cfg.output.nats = true;
    if (!c.output.empty()) cfg.output.path = c.output;
    if (c.threads) cfg.threads = c.threads;
    if (cfg.threads) omp_set_num_threads(static_cast<int>(*cfg.threads));
    return cfg;
}

/// Writes through `fn` to the configured path, or to stdout.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Config, "cannot write '" + path + "'");
    fn(out);
}

int cmd_analyze(const Common& c) {
    const auto cfg = resolve(c);
    const auto model = build_model(cfg.model, cfg.parameters, cfg.ground_state);
    const auto analysis = analyze(model.h, model.beta);
    auto doc = metrics_json(analysis, model.h.blocks(), cfg.output.nats);
    doc["config"] = cfg.to_json();
    emit(cfg.output.path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
    return 0;
}

int cmd_sweep(const Common& c, std::optional<std::uint64_t> seed, std::optional<std::size_t> count) {
    auto cfg = resolve(c);
    SweepSpec spec = cfg.sweep ? *cfg.sweep : default_sweep(cfg.model.preset);
    if (seed) spec.seed = seed;
    if (count) {
        if (spec.mode != SweepMode::Random) throw Error(ErrorKind::Config, "--count applies to random sweeps only");
        spec.count = *count;
    }
    if (spec.mode == SweepMode::Random && !spec.seed)
        throw Error(ErrorKind::Config, "random sweeps need --seed (or sweep.seed in the config)");
    cfg.sweep = spec;

    const auto points = sweep_points(spec, cfg.parameters);
    const auto records = run_sweep(cfg.model, points, cfg.ground_state);
    emit(cfg.output.path, [&](std::ostream& out) { write_csv(out, cfg.model, records, cfg.output.nats); });

    std::map<std::string, std::size_t> statuses;
    for (const auto& r : records) ++statuses[r.status];
    if (!cfg.output.path.empty()) {
        json meta{{"config", cfg.to_json()}, {"points", records.size()}, {"status_counts", statuses}};
        std::ofstream side(cfg.output.path + ".meta.json");
        side << meta.dump(2) << '\n';
    }
    for (const auto& [status, n] : statuses)
        if (status != "ok") std::cerr << "sweep: " << n << " point(s) with status " << status << '\n';
    return 0;
}

int cmd_machine(const Common& c, bool spin) {
    auto cfg = resolve(c);
    if (spin) cfg.output.spin_level = true;
    const auto model = build_model(cfg.model, cfg.parameters, cfg.ground_state);
    const auto analysis = analyze(model.h, model.beta);
    emit(cfg.output.path, [&](std::ostream& out) {
        out << "// config: " << cfg.to_json().dump() << '\n';
        write_machine_dot(out, analysis, model.h.blocks(), cfg.output.spin_level);
    });
    return 0;
}

int cmd_sample(const Common& c, std::optional<std::uint64_t> seed, std::optional<std::size_t> length) {
    auto cfg = resolve(c);
    if (seed) cfg.output.seed = seed;
    if (length) cfg.output.length = *length;
    if (!cfg.output.seed) throw Error(ErrorKind::Config, "sample needs --seed (or output.seed in the config)");
    const auto model = build_model(cfg.model, cfg.parameters, cfg.ground_state);
    const auto analysis = analyze(model.h, model.beta);
    const auto& space = model.h.blocks();
    const std::size_t n = space.range();
    auto spins = sample_sequence(analysis.chain, space, (cfg.output.length + n - 1) / n, *cfg.output.seed);
    spins.resize(cfg.output.length);
    json meta{{"config", cfg.to_json()}, {"rng", Rng::name()}, {"spins", spins.size()}};
    emit(cfg.output.path, [&](std::ostream& out) { write_sequence(out, spins, meta); });
    return 0;
}

int cmd_validate(std::size_t instances, std::uint64_t seed, bool corrupt, std::size_t threads) {
    if (threads) omp_set_num_threads(static_cast<int>(threads));
    ValidationOptions opts;
    opts.instances = instances;
    opts.seed = seed;
    opts.corrupt_p = corrupt;
    bool ok = true;
    for (const auto& check : run_validation(opts)) {
        std::printf("%s  %-36s residual %.3e  tolerance %.1e%s%s\n", check.pass ? "PASS" : "FAIL",
                    check.name.c_str(), check.residual, check.tolerance, check.detail.empty() ? "" : "  ",
                    check.detail.c_str());
        ok = ok && check.pass;
    }
    return ok ? 0 : 2;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidParameter:
    case ErrorKind::LimitParameter: return 1;
    default: return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ε-machines of one-dimensional finite-range spin chains"};
    app.require_subcommand(1);

    Common common;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> count, length;
    bool spin = false;

    auto* analyze_cmd = app.add_subcommand("analyze", "metrics of one parameter point (JSON)");
    add_common(analyze_cmd, common);

    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a grid or random cloud of points (CSV)");
    add_common(sweep_cmd, common);
    sweep_cmd->add_option("--seed", seed, "seed for random sweeps");
    sweep_cmd->add_option("--count", count, "number of random points");

    auto* machine_cmd = app.add_subcommand("machine", "causal-state graph of one point (DOT)");
    add_common(machine_cmd, common);
    machine_cmd->add_flag("--spin", spin, "single-spin machine instead of the block machine");

    auto* sample_cmd = app.add_subcommand("sample", "draw a stationary spin sequence");
    add_common(sample_cmd, common);
    sample_cmd->add_option("--seed", seed, "random seed (required)");
    sample_cmd->add_option("--length", length, "number of spins");

    std::size_t instances = ValidationOptions{}.instances;
    std::uint64_t validate_seed = ValidationOptions{}.seed;
    bool corrupt = false;
    std::size_t validate_threads = 0;
    auto* validate_cmd = app.add_subcommand("validate", "run the oracle suite against the analytic pipeline");
    validate_cmd->add_option("--instances", instances, "random NN/NNN instances");
    validate_cmd->add_option("--seed", validate_seed, "instance seed");
    validate_cmd->add_option("--threads", validate_threads, "OpenMP threads");
    validate_cmd->add_flag("--corrupt-p", corrupt, "test hook: perturb P before certification");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (analyze_cmd->parsed()) return cmd_analyze(common);
        if (sweep_cmd->parsed()) return cmd_sweep(common, seed, count);
        if (machine_cmd->parsed()) return cmd_machine(common, spin);
        if (sample_cmd->parsed()) return cmd_sample(common, seed, length);
        if (validate_cmd->parsed()) return cmd_validate(instances, validate_seed, corrupt, validate_threads);
    } catch (const Error& e) {
        std::cerr << "isingem: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "isingem: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
