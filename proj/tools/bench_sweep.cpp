// Benchmark comparing the serial reference sweep against the OpenMP-parallel
// one on the same grid, verifying that both produce identical rows.

#include <chrono>
#include <cstdio>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hrris/experiment.hpp"
#include "hrris/units.hpp"

namespace {

hrris::SystemParams bench_params() {
    hrris::SystemParams p;
    p.epsilon = 0.01;
    p.l = 100;
    p.pa_max_w = hrris::dbm_to_watt(-10.0);
    p.pr_max_w = hrris::dbm_to_watt(-30.0);
    p.noise_dbm = -80.0;
    p.geometry.alice_pos = {0.0, 0.0};
    p.geometry.ris_pos = {51.0, 0.0};
    p.geometry.bob_pos = {50.0, 2.0};
    p.geometry.willie_pos = {30.0, 5.0};
    p.geometry.pathloss_exponents = {{hrris::Link::ar, 2.2},
                                     {hrris::Link::rb, 2.8},
                                     {hrris::Link::ab, 4.2},
                                     {hrris::Link::aw, 4.2},
                                     {hrris::Link::rw, 2.8}};
    return p;
}

template <typename F> double time_seconds(F &&fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool same_rows(const hrris::SweepResult &a, const hrris::SweepResult &b) {
    return hrris::csv_string(a) == hrris::csv_string(b);
}

} // namespace

int main(int argc, char **argv) {
    int trials = argc > 1 ? std::atoi(argv[1]) : 12;

    hrris::SystemParams params = bench_params();
    hrris::SweepSpec spec;
    spec.n_values = {36, 64, 100};
    spec.k_values = {0, 4};
    spec.trials = trials;
    spec.base_seed = 7;
    hrris::AoSettings settings;

#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    int rows = static_cast<int>(spec.n_values.size() * spec.k_values.size()) * spec.trials;
    std::cout << "sweep benchmark: " << rows << " rows, " << threads << " thread(s)\n";

    hrris::SweepResult serial_result, parallel_result;
    double t_serial =
        time_seconds([&] { serial_result = hrris::run_sweep_serial(params, spec, settings); });
    double t_parallel = time_seconds([&] { parallel_result = hrris::run_sweep(params, spec, settings); });

    std::printf("serial   : %8.3f s  (%6.1f ms/row)\n", t_serial, 1e3 * t_serial / rows);
    std::printf("parallel : %8.3f s  (%6.1f ms/row)\n", t_parallel, 1e3 * t_parallel / rows);
    std::printf("speedup  : %8.2fx\n", t_serial / t_parallel);

    if (!same_rows(serial_result, parallel_result)) {
        std::cerr << "FAIL: serial and parallel sweeps disagree\n";
        return 1;
    }
    std::cout << "serial and parallel rows identical\n";
    return 0;
}
