// Compares the serial reference replication loop against the OpenMP path and
// checks that both produce the same counts.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "speckle/montecarlo.hpp"

using namespace speckle;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int reps = 400;
    if (argc > 1) reps = std::atoi(argv[1]);

    ScenarioSpec spec;
    spec.scenario = Scenario::null_hypothesis;
    spec.params1 = {-1.5, 0.5, 1.0};
    spec.params2 = spec.params1;
    spec.window = 49;
    spec.max_reps = reps;
    const auto kinds = all_distances();

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    std::printf("replications: %d, kinds: %zu, max threads: %d\n", spec.max_reps,
                kinds.size(), max_threads);

    auto t0 = std::chrono::steady_clock::now();
    const MCReport serial = run_experiment(spec, kinds, 1);
    const double t_serial = seconds_since(t0);
    std::printf("serial:   %8.3f s  (%zu valid)\n", t_serial, serial.valid_reps);

    for (int threads : {2, 4, 0}) {
        if (threads > max_threads) continue;
        t0 = std::chrono::steady_clock::now();
        const MCReport parallel = run_experiment(spec, kinds, threads);
        const double t_par = seconds_since(t0);
        const bool same = parallel == serial;
        std::printf("threads %d: %8.3f s  speedup %.2fx  counts %s\n",
                    threads == 0 ? max_threads : threads, t_par, t_serial / t_par,
                    same ? "identical" : "MISMATCH");
        if (!same) return 1;
    }
    return 0;
}
