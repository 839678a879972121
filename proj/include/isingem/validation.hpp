#pragma once

#include "isingem/config.hpp"
#include "isingem/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace isingem {

/// A random NN or NNN point drawn from the complexity-entropy figure's ranges:
/// β log-uniform on [10⁻⁴, 10²], couplings on [−1.5, 1.5], field on [−3, 3].
struct Instance {
    Preset preset;
    ParamMap params;
    ModelInstance model;
};

Instance random_instance(Preset preset, Rng& rng);

struct ValidationCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct ValidationOptions {
    std::size_t instances = 20;
    std::uint64_t seed = 20150101;
    std::size_t sample_spins = 1'000'000;
    std::size_t sampled_instances = 4;
    /// Test hook: perturbs P before certification so the failure path can be exercised.
    bool corrupt_p = false;
};

/// Runs every oracle comparison on alternating NN/NNN instances. Each check reports its
/// worst residual against its tolerance.
std::vector<ValidationCheck> run_validation(const ValidationOptions& options);

} // namespace isingem
