#include "isingem/sweep.hpp"

#include "isingem/errors.hpp"
#include "isingem/oracle.hpp"

#include <cmath>
#include <limits>

namespace isingem {

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<ParamMap> sweep_points(const SweepSpec& spec, const ParamMap& fixed) {
    std::vector<ParamMap> points;
    const auto value = [](const Axis& a, double t) {
        if (a.log_scale) return std::exp(std::log(a.min) + t * (std::log(a.max) - std::log(a.min)));
        return a.min + t * (a.max - a.min);
    };

    if (spec.mode == SweepMode::Random) {
        if (!spec.seed) throw Error(ErrorKind::Config, "random sweeps need a seed (--seed or sweep.seed)");
        if (spec.count == 0) throw Error(ErrorKind::Config, "random sweep needs count >= 1");
        points.reserve(spec.count);
        for (std::size_t i = 0; i < spec.count; ++i) {
            Rng rng(point_seed(*spec.seed, i));
            ParamMap p = fixed;
            for (const auto& a : spec.axes) p[a.name] = value(a, rng.uniform());
            points.push_back(std::move(p));
        }
        return points;
    }

    std::size_t total = 1;
    for (const auto& a : spec.axes) {
        if (a.count == 0) throw Error(ErrorKind::Config, "grid axis '" + a.name + "' has count 0");
        total *= a.count;
    }
    points.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        ParamMap p = fixed;
        std::size_t rest = i;
        for (std::size_t k = spec.axes.size(); k-- > 0;) {
            const auto& a = spec.axes[k];
            const std::size_t step = rest % a.count;
            rest /= a.count;
            const double t = a.count > 1 ? static_cast<double>(step) / static_cast<double>(a.count - 1) : 0.0;
            p[a.name] = value(a, t);
        }
        points.push_back(std::move(p));
    }
    return points;
}

SweepRecord evaluate_point(const ModelSpec& model, const ParamMap& params, bool ground_state, std::size_t index) {
    SweepRecord rec;
    rec.index = index;
    rec.params = default_parameters(model);
    for (const auto& [k, v] : params) rec.params[k] = v;
    try {
        const auto inst = build_model(model, rec.params, ground_state);
        const auto a = analyze(inst.h, inst.beta);
        rec.metrics = a.metrics;
        rec.log_lambda0 = a.log_lambda0;
        rec.max_residual = a.max_residual;
        rec.n_classes = a.classes.size();
        if (!(rec.max_residual <= kFlagResidual)) rec.status = "flagged";
    } catch (const Error& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.metrics = MachineMetrics{nan, nan, nan, nan, nan, 0, nan, nan, nan, 0};
        rec.log_lambda0 = nan;
        rec.max_residual = nan;
        if (const auto* r = dynamic_cast<const ResidualError*>(&e)) rec.max_residual = r->residual();
        rec.status = to_string(e.kind());
    }
    return rec;
}

std::vector<SweepRecord> run_sweep(const ModelSpec& model, const std::vector<ParamMap>& points, bool ground_state) {
    std::vector<SweepRecord> out(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = evaluate_point(model, points[k], ground_state, k);
    }
    return out;
}

std::vector<SweepRecord> run_sweep_serial(const ModelSpec& model, const std::vector<ParamMap>& points,
                                          bool ground_state) {
    std::vector<SweepRecord> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out.push_back(evaluate_point(model, points[i], ground_state, i));
    return out;
}

} // namespace isingem
