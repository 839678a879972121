#pragma once

#include "isingem/config.hpp"
#include "isingem/emachine.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace isingem {

/// One evaluated parameter point.
struct SweepRecord {
    std::size_t index = 0;
    ParamMap params;
    MachineMetrics metrics;
    double log_lambda0 = 0.0;
    double max_residual = 0.0;
    std::size_t n_classes = 0;
    std::string status = "ok"; ///< "ok", "flagged", or the error kind of a failed point

    bool ok() const noexcept { return status == "ok"; }
};

/// Records whose certification residual exceeds this are flagged.
inline constexpr double kFlagResidual = 1e-10;

/// splitmix64 of the seed combined with the point index; one independent stream per point.
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index);

/// Parameter values of every sweep point in index order. Grid points run over the first
/// axis slowest. Random sweeps need a seed.
std::vector<ParamMap> sweep_points(const SweepSpec& spec, const ParamMap& fixed);

/// Full pipeline for one point; numerical failures become the record status.
SweepRecord evaluate_point(const ModelSpec& model, const ParamMap& params, bool ground_state,
                           std::size_t index);

/// Points evaluated across OpenMP threads, gathered in index order.
std::vector<SweepRecord> run_sweep(const ModelSpec& model, const std::vector<ParamMap>& points,
                                   bool ground_state);

/// Single-threaded reference for run_sweep.
std::vector<SweepRecord> run_sweep_serial(const ModelSpec& model, const std::vector<ParamMap>& points,
                                          bool ground_state);

} // namespace isingem
