#include "isingem/config.hpp"

#include "isingem/errors.hpp"
#include "isingem/models.hpp"
#include "isingem/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace isingem {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::Config, "config field '" + field + "': " + what);
}

double get_number(const json& node, const std::string& field) {
    if (!node.is_number()) config_error(field, "expected a number");
    const double x = node.get<double>();
    if (!std::isfinite(x)) config_error(field, "must be finite");
    return x;
}

std::size_t get_count(const json& node, const std::string& field) {
    if (!node.is_number_integer() && !node.is_number_unsigned()) config_error(field, "expected an integer");
    const auto x = node.get<long long>();
    if (x < 1) config_error(field, "must be >= 1");
    return static_cast<std::size_t>(x);
}

std::uint64_t get_seed(const json& node, const std::string& field) {
    if (!node.is_number_integer() && !node.is_number_unsigned()) config_error(field, "expected an integer");
    if (node.is_number_integer() && node.get<long long>() < 0) config_error(field, "must be >= 0");
    return node.get<std::uint64_t>();
}

std::vector<double> get_numbers(const json& node, const std::string& field) {
    if (!node.is_array()) config_error(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i)
        out.push_back(get_number(node[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

void reject_unknown(const json& node, const std::string& section, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : node.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) config_error(section.empty() ? key : section + "." + key, "unknown field");
    }
}

void check_parameter(const ModelSpec& model, const std::string& name, const std::string& field) {
    const auto names = model.parameter_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        config_error(field, "unknown parameter '" + name + "' for preset " + to_string(model.preset) + " (expected one of " +
                                list + ")");
    }
}

Axis parse_axis(const json& node, const std::string& field, bool grid) {
    if (!node.is_object()) config_error(field, "expected an object");
    reject_unknown(node, field, {"name", "min", "max", "count", "scale"});
    Axis a;
    if (!node.contains("name") || !node["name"].is_string()) config_error(field + ".name", "expected a string");
    a.name = node["name"].get<std::string>();
    if (!node.contains("min")) config_error(field + ".min", "missing");
    if (!node.contains("max")) config_error(field + ".max", "missing");
    a.min = get_number(node["min"], field + ".min");
    a.max = get_number(node["max"], field + ".max");
    if (a.max < a.min) config_error(field, "max < min");
    if (node.contains("scale")) {
        const auto s = node["scale"].get<std::string>();
        if (s == "log") a.log_scale = true;
        else if (s != "linear") config_error(field + ".scale", "expected 'linear' or 'log'");
    }
    if (a.log_scale && !(a.min > 0.0)) config_error(field, "log scale needs min > 0");
    if (grid) {
        if (!node.contains("count")) config_error(field + ".count", "missing");
        a.count = get_count(node["count"], field + ".count");
    }
    return a;
}

} // namespace

const char* to_string(Preset preset) noexcept {
    switch (preset) {
    case Preset::NN: return "nn";
    case Preset::NNN: return "nnn";
    case Preset::PBRW: return "pbrw";
    case Preset::Custom: return "custom";
    }
    return "?";
}

Preset parse_preset(const std::string& name) {
    if (name == "nn") return Preset::NN;
    if (name == "nnn") return Preset::NNN;
    if (name == "pbrw") return Preset::PBRW;
    if (name == "custom") return Preset::Custom;
    config_error("model.preset", "unknown preset '" + name + "' (expected nn, nnn, pbrw or custom)");
}

std::vector<std::string> ModelSpec::parameter_names() const {
    switch (preset) {
    case Preset::NN: return {"J", "B", "beta"};
    case Preset::NNN: return {"J1", "J2", "B", "beta"};
    case Preset::PBRW: return {"p", "r"};
    case Preset::Custom: break;
    }
    std::vector<std::string> names;
    if (coupling_table.empty())
        for (std::size_t d = 1; d <= range; ++d) names.push_back("J" + std::to_string(d));
    names.push_back("B");
    names.push_back("beta");
    return names;
}

ParamMap default_parameters(const ModelSpec& spec) {
    ParamMap out;
    switch (spec.preset) {
    case Preset::NN: return {{"J", 1.0}, {"B", 0.0}, {"beta", 1.0}};
    case Preset::NNN: return {{"J1", 1.0}, {"J2", 0.0}, {"B", 0.0}, {"beta", 1.0}};
    case Preset::PBRW: return {{"p", 0.5}, {"r", 0.5}};
    case Preset::Custom: break;
    }
    if (spec.coupling_table.empty())
        for (std::size_t d = 1; d <= spec.range; ++d)
            out["J" + std::to_string(d)] = d <= spec.couplings.size() ? spec.couplings[d - 1] : 0.0;
    out["B"] = 0.0;
    out["beta"] = 1.0;
    return out;
}

ModelInstance build_model(const ModelSpec& spec, const ParamMap& params, bool ground_state) {
    ParamMap p = default_parameters(spec);
    for (const auto& [k, v] : params) p[k] = v;
    const double beta = ground_state ? kGroundStateBeta : (p.count("beta") ? p["beta"] : kPBRWBeta);
    switch (spec.preset) {
    case Preset::NN: return {nn_ising({p["J"], p["B"], beta}), beta};
    case Preset::NNN: return {nnn_ising({p["J1"], p["J2"], p["B"], beta}), beta};
    case Preset::PBRW:
        if (ground_state) throw Error(ErrorKind::Config, "pbrw has no ground-state mode; use the nn preset");
        return {pbrw_hamiltonian({p["p"], p["r"]}), kPBRWBeta};
    case Preset::Custom: break;
    }
    BlockSpace space(SpinAlphabet(spec.spins), spec.range);
    if (!spec.coupling_table.empty()) return {Hamiltonian(space, p["B"], spec.coupling_table), beta};
    std::vector<double> J;
    for (std::size_t d = 1; d <= spec.range; ++d) J.push_back(p["J" + std::to_string(d)]);
    return {Hamiltonian::product_form(space, p["B"], J), beta};
}

SweepSpec default_sweep(Preset preset) {
    SweepSpec s;
    switch (preset) {
    case Preset::NN:
        s.mode = SweepMode::Random;
        s.count = 100'000;
        s.axes = {{"beta", 1e-4, 1e2, 1, true}, {"J", -1.5, 1.5, 1, false}, {"B", -3.0, 3.0, 1, false}};
        break;
    case Preset::NNN:
        s.axes = {{"J1", -2.0, 2.0, 41, false}, {"J2", -2.0, 2.0, 41, false}};
        break;
    case Preset::PBRW:
        s.axes = {{"r", 0.01, 0.99, 99, false}, {"p", 0.01, 0.99, 99, false}};
        break;
    case Preset::Custom:
        s.axes = {{"beta", 0.1, 10.0, 21, true}};
        break;
    }
    return s;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) config_error("<root>", "expected an object");
    reject_unknown(doc, "", {"model", "parameters", "sweep", "output", "threads"});
    RunConfig cfg;
    cfg.source = doc;

    if (doc.contains("model")) {
        const auto& m = doc["model"];
        if (!m.is_object()) config_error("model", "expected an object");
        reject_unknown(m, "model", {"preset", "range", "spins", "couplings", "coupling_table"});
        if (m.contains("preset")) {
            if (!m["preset"].is_string()) config_error("model.preset", "expected a string");
            cfg.model.preset = parse_preset(m["preset"].get<std::string>());
        }
        if (cfg.model.preset == Preset::Custom) {
            if (!m.contains("range")) config_error("model.range", "custom model needs a range");
            cfg.model.range = get_count(m["range"], "model.range");
            if (m.contains("spins")) cfg.model.spins = get_numbers(m["spins"], "model.spins");
            if (m.contains("couplings")) cfg.model.couplings = get_numbers(m["couplings"], "model.couplings");
            if (m.contains("coupling_table"))
                cfg.model.coupling_table = get_numbers(m["coupling_table"], "model.coupling_table");
            if (!cfg.model.coupling_table.empty() && !cfg.model.couplings.empty())
                config_error("model", "give either couplings or coupling_table, not both");
            if (!cfg.model.couplings.empty() && cfg.model.couplings.size() != cfg.model.range)
                config_error("model.couplings", "needs one entry per distance 1..range");
        } else {
            for (const char* k : {"range", "spins", "couplings", "coupling_table"})
                if (m.contains(k)) config_error(std::string("model.") + k, "only valid for the custom preset");
        }
    }

    if (doc.contains("parameters")) {
        const auto& p = doc["parameters"];
        if (!p.is_object()) config_error("parameters", "expected an object");
        for (const auto& [key, value] : p.items()) {
            if (key == "ground_state") {
                if (!value.is_boolean()) config_error("parameters.ground_state", "expected true or false");
                cfg.ground_state = value.get<bool>();
                continue;
            }
            check_parameter(cfg.model, key, "parameters." + key);
            cfg.parameters[key] = get_number(value, "parameters." + key);
        }
    }

    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        if (!s.is_object()) config_error("sweep", "expected an object");
        reject_unknown(s, "sweep", {"mode", "axes", "count", "seed"});
        SweepSpec spec;
        std::string mode = "grid";
        if (s.contains("mode")) mode = s["mode"].get<std::string>();
        if (mode == "random") spec.mode = SweepMode::Random;
        else if (mode != "grid") config_error("sweep.mode", "expected 'grid' or 'random'");
        if (s.contains("axes")) {
            if (!s["axes"].is_array()) config_error("sweep.axes", "expected an array");
            for (std::size_t i = 0; i < s["axes"].size(); ++i) {
                const std::string field = "sweep.axes[" + std::to_string(i) + "]";
                spec.axes.push_back(parse_axis(s["axes"][i], field, spec.mode == SweepMode::Grid));
                check_parameter(cfg.model, spec.axes.back().name, field + ".name");
            }
        } else {
            const auto defaults = default_sweep(cfg.model.preset);
            if (defaults.mode != spec.mode && s.contains("mode"))
                config_error("sweep.axes", "no default axes for this preset in " + mode + " mode");
            spec.axes = defaults.axes;
            spec.mode = defaults.mode;
            spec.count = defaults.count;
        }
        if (s.contains("count")) spec.count = get_count(s["count"], "sweep.count");
        if (s.contains("seed")) spec.seed = get_seed(s["seed"], "sweep.seed");
        cfg.sweep = spec;
    }

    if (doc.contains("output")) {
        const auto& o = doc["output"];
        if (!o.is_object()) config_error("output", "expected an object");
        reject_unknown(o, "output", {"path", "units", "level", "length", "seed"});
        if (o.contains("path")) cfg.output.path = o["path"].get<std::string>();
        if (o.contains("units")) {
            const auto u = o["units"].get<std::string>();
            if (u == "nats") cfg.output.nats = true;
            else if (u != "bits") config_error("output.units", "expected 'bits' or 'nats'");
        }
        if (o.contains("level")) {
            const auto l = o["level"].get<std::string>();
            if (l == "spin") cfg.output.spin_level = true;
            else if (l != "block") config_error("output.level", "expected 'block' or 'spin'");
        }
        if (o.contains("length")) cfg.output.length = get_count(o["length"], "output.length");
        if (o.contains("seed")) cfg.output.seed = get_seed(o["seed"], "output.seed");
    }
    if (doc.contains("threads")) cfg.threads = get_count(doc["threads"], "threads");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line number.
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw Error(ErrorKind::Config, path + ":" + std::to_string(line) + ": " + e.what());
    }
    try {
        return parse_config(doc);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, path + ": " + e.what());
    }
}

void apply_parameter_overrides(RunConfig& config, const std::vector<std::string>& assignments) {
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) config_error("--param", "expected name=value, got '" + a + "'");
        const std::string name = a.substr(0, eq);
        check_parameter(config.model, name, "--param");
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(a.substr(eq + 1), &used);
            if (used != a.size() - eq - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            config_error("--param", "cannot read a number from '" + a + "'");
        }
        if (!std::isfinite(value)) config_error("--param", name + " must be finite");
        config.parameters[name] = value;
    }
}

json RunConfig::to_json() const {
    json doc;
    json m{{"preset", isingem::to_string(model.preset)}};
    if (model.preset == Preset::Custom) {
        m["range"] = model.range;
        m["spins"] = model.spins;
        if (model.coupling_table.empty()) m["couplings"] = model.couplings;
        else m["coupling_table"] = model.coupling_table;
    }
    doc["model"] = m;
    json p = json::object();
    for (const auto& [k, v] : parameters) p[k] = v;
    if (ground_state) p["ground_state"] = true;
    doc["parameters"] = p;
    if (sweep) {
        json s{{"mode", sweep->mode == SweepMode::Grid ? "grid" : "random"}};
        json axes = json::array();
        for (const auto& a : sweep->axes) {
            json ax{{"name", a.name}, {"min", a.min}, {"max", a.max}, {"scale", a.log_scale ? "log" : "linear"}};
            if (sweep->mode == SweepMode::Grid) ax["count"] = a.count;
            axes.push_back(ax);
        }
        s["axes"] = axes;
        if (sweep->mode == SweepMode::Random) s["count"] = sweep->count;
        if (sweep->seed) s["seed"] = *sweep->seed;
        doc["sweep"] = s;
    }
    json o{{"units", output.nats ? "nats" : "bits"}, {"level", output.spin_level ? "spin" : "block"},
           {"length", output.length}};
    if (!output.path.empty()) o["path"] = output.path;
    if (output.seed) o["seed"] = *output.seed;
    doc["output"] = o;
    if (threads) doc["threads"] = *threads;
    return doc;
}

} // namespace isingem
