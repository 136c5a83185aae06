// Benchmark of the OpenMP estimator against the serial reference: same
// seeds, same paths, so the means must agree bit for bit while the wall
// clock shows the parallel speedup.

#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "stablemc/montecarlo.hpp"
#include "stablemc/problems.hpp"

int main(int argc, char** argv) {
    int n = 10;
    double s = 0.5;
    double eps = 1.0 / 40.0;
    std::size_t n_samples = 20000;
    int scheme = 1;
    std::uint64_t seed = 2024;

    CLI::App app{"serial vs OpenMP path-sampling benchmark"};
    app.add_option("--n", n, "space dimension");
    app.add_option("--s", s, "stability half-index");
    app.add_option("--eps", eps, "truncation level");
    app.add_option("--N", n_samples, "paths per run");
    app.add_option("--scheme", scheme, "1 or 2");
    app.add_option("--seed", seed, "base seed");
    CLI11_PARSE(app, argc, argv);

    const auto ex = stablemc::problems::build_example1(n, s);
    stablemc::schemes::SchemeConfig cfg;
    cfg.scheme = scheme == 1 ? stablemc::schemes::Scheme::remove_small_jumps
                             : stablemc::schemes::Scheme::replace_small_jumps;
    cfg.eps = eps;
    const std::vector<double> x0(n, 1.0 / n);
    const double t0 = 0.5;

#ifdef _OPENMP
    const int max_workers = omp_get_max_threads();
#else
    const int max_workers = 1;
#endif

    std::printf("example1  n=%d  s=%g  eps=%g  N=%zu  scheme=%d\n", n, s, eps,
                n_samples, scheme);

    const auto serial = stablemc::montecarlo::estimate_serial(
        ex.problem, cfg, t0, x0, n_samples, seed);
    std::printf("%-22s %10.3fs   mean=%.17g\n", "serial reference",
                serial.elapsed_seconds, serial.mean);

    for (int workers = 1; workers <= max_workers; workers *= 2) {
        const auto par = stablemc::montecarlo::estimate(ex.problem, cfg, t0, x0,
                                                        n_samples, seed, workers);
        const bool same = par.mean == serial.mean;
        std::printf("openmp workers=%-8d %10.3fs   speedup=%5.2fx   %s\n", workers,
                    par.elapsed_seconds,
                    serial.elapsed_seconds / par.elapsed_seconds,
                    same ? "mean bit-identical" : "MEAN MISMATCH");
        if (!same) return 1;
    }
    return 0;
}
