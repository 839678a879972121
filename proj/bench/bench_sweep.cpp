// Wall-clock comparison of the OpenMP kernels against their serial references.
//   bench_sweep [points] [threads]
// Also checks that both paths produce identical results.

#include "isingem/config.hpp"
#include "isingem/models.hpp"
#include "isingem/oracle.hpp"
#include "isingem/report.hpp"
#include "isingem/sweep.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

using namespace isingem;

namespace {

template <class Fn>
double seconds(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv(const ModelSpec& model, const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    write_csv(out, model, records, false);
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t count = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
    if (argc > 2) omp_set_num_threads(std::atoi(argv[2]));
    bool identical = true;

    for (Preset preset : {Preset::NN, Preset::NNN}) {
        ModelSpec model;
        model.preset = preset;
        SweepSpec spec;
        spec.mode = SweepMode::Random;
        spec.count = count;
        spec.seed = 7;
        spec.axes = {{"beta", 1e-4, 1e2, 1, true}, {"B", -3.0, 3.0, 1, false}};
        if (preset == Preset::NN) spec.axes.push_back({"J", -1.5, 1.5, 1, false});
        else spec.axes.insert(spec.axes.end(), {{"J1", -1.5, 1.5, 1, false}, {"J2", -1.5, 1.5, 1, false}});
        const auto points = sweep_points(spec, {});

        std::vector<SweepRecord> serial, parallel;
        const double ts = seconds([&] { serial = run_sweep_serial(model, points, false); });
        const double tp = seconds([&] { parallel = run_sweep(model, points, false); });
        const bool same = csv(model, serial) == csv(model, parallel);
        identical = identical && same;
        std::printf("sweep %-4s %7zu points  serial %8.3f s  parallel %8.3f s  (%d threads)  speedup %5.2fx  %s\n",
                    to_string(preset), count, ts, tp, omp_get_max_threads(), ts / tp,
                    same ? "identical" : "MISMATCH");
    }

    // Exhaustive Gibbs enumeration: υ^N configurations.
    const auto h = nnn_ising({1.0, -0.6, 0.3, 0.8});
    for (std::size_t N : {8, 10}) {
        GibbsEnsemble a, b;
        const double ts = seconds([&] { a = enumerate_gibbs_serial(h, 0.8, N, Boundary::Open); });
        const double tp = seconds([&] { b = enumerate_gibbs(h, 0.8, N, Boundary::Open); });
        const bool same = a.probs == b.probs;
        identical = identical && same;
        std::printf("enumerate N=%-2zu %9zu configs  serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", N,
                    a.probs.size(), ts, tp, ts / tp, same ? "identical" : "MISMATCH");
    }
    return identical ? 0 : 1;
}
