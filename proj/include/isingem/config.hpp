#pragma once

#include "isingem/hamiltonian.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isingem {

enum class Preset { NN, NNN, PBRW, Custom };

const char* to_string(Preset preset) noexcept;

/// Which Hamiltonian family a run uses. Custom models give either product couplings
/// J_d (swept as J1..Jn) or a full symmetric table Λ_d(s, s′).
struct ModelSpec {
    Preset preset = Preset::NN;
    std::size_t range = 1;
    std::vector<double> spins{-1.0, 1.0};
    std::vector<double> couplings;     ///< product form J_d, d = 1..n
    std::vector<double> coupling_table; ///< [d−1][s][s′]; used when non-empty

    /// Parameter names in canonical column order.
    std::vector<std::string> parameter_names() const;
};

using ParamMap = std::map<std::string, double>;

/// Hamiltonian and inverse temperature for one parameter point.
struct ModelInstance {
    Hamiltonian h;
    double beta;
};

/// Missing parameters fall back to the preset defaults. `ground_state` replaces β by
/// kGroundStateBeta (not available for pbrw, which fixes β = 1).
ModelInstance build_model(const ModelSpec& spec, const ParamMap& params, bool ground_state);

ParamMap default_parameters(const ModelSpec& spec);

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 1; ///< grid only
    bool log_scale = false;
};

enum class SweepMode { Grid, Random };

struct SweepSpec {
    SweepMode mode = SweepMode::Grid;
    std::vector<Axis> axes;
    std::size_t count = 0; ///< random only
    std::optional<std::uint64_t> seed;
};

/// Figure defaults: random log-β NN cloud, NNN (J₁, J₂) ground-state grid,
/// PBRW (r, p) grid.
SweepSpec default_sweep(Preset preset);

struct OutputSpec {
    std::string path; ///< empty: stdout
    bool nats = false;
    bool spin_level = false; ///< machine graphs
    std::size_t length = 1'000'000; ///< sample length in spins
    std::optional<std::uint64_t> seed;
};

struct RunConfig {
    ModelSpec model;
    ParamMap parameters;
    bool ground_state = false;
    std::optional<SweepSpec> sweep;
    OutputSpec output;
    std::optional<std::size_t> threads;
    nlohmann::json source = nlohmann::json::object(); ///< document as read

    /// Effective configuration after overrides, for echoing into outputs.
    nlohmann::json to_json() const;
};

/// Parses a config document; errors carry ErrorKind::Config and name the offending field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Applies "name=value" overrides, checking names against the model.
void apply_parameter_overrides(RunConfig& config, const std::vector<std::string>& assignments);

Preset parse_preset(const std::string& name);

} // namespace isingem
