// Compares the serial reference ensemble against the OpenMP-parallel one:
// wall time, steps/s, and bitwise agreement of the results.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "dumbbell/estimator.hpp"
#include "dumbbell/sde.hpp"

int main(int argc, char** argv) {
    using namespace dumbbell;
    using clock = std::chrono::steady_clock;

    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = argc > 1 ? std::atof(argv[1]) : 1e3;
    cfg.replicas = argc > 2 ? std::atoi(argv[2]) : 16;
    cfg.seed = 42;

    DumbbellParams params{1.0, 1.0};
    Forcing forcing{{{1.0, 1.0, 1.0, 0.0}}, 0.0, 0.5};

    const double total_steps =
        cfg.t_final / cfg.dt * static_cast<double>(cfg.replicas);
    std::printf("t_final=%g replicas=%d (%.3g steps total)\n", cfg.t_final,
                cfg.replicas, total_steps);

    const auto t0 = clock::now();
    const auto serial = run_ensemble_serial(forcing, params, cfg);
    const std::chrono::duration<double> dt_serial = clock::now() - t0;

    const auto t1 = clock::now();
    const auto parallel = run_ensemble(forcing, params, cfg);
    const std::chrono::duration<double> dt_parallel = clock::now() - t1;

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i) {
        identical = serial[i].final_state.x == parallel[i].final_state.x &&
                    serial[i].final_state.y == parallel[i].final_state.y;
    }

    const DriftEstimate est = estimate_drift(parallel);
    std::printf("serial:   %8.3f s  (%.3g steps/s)\n", dt_serial.count(),
                total_steps / dt_serial.count());
    std::printf("parallel: %8.3f s  (%.3g steps/s, speedup %.2fx)\n",
                dt_parallel.count(), total_steps / dt_parallel.count(),
                dt_serial.count() / dt_parallel.count());
    std::printf("bitwise identical: %s\n", identical ? "yes" : "NO");
    std::printf("drift estimate: %.6g +- %.2g\n", est.mean_drift,
                est.std_error);
    return identical ? 0 : 1;
}
