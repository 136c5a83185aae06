#include "stablemc/montecarlo.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stablemc::montecarlo {

namespace {

// Kahan compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double t = v - carry;
        const double next = sum + t;
        carry = (next - sum) - t;
        sum = next;
    }
    double total() const { return sum; }
};

// Compensated mean around a pivot; exact for constant samples, which is what
// makes the zero-variance contract hold bit for bit.
double pivoted_mean(std::span<const double> xs) {
    const double pivot = xs[0];
    Kahan acc;
    for (const double x : xs) acc.add(x - pivot);
    return pivot + acc.total() / static_cast<double>(xs.size());
}

int effective_workers(int workers) {
#ifdef _OPENMP
    return workers > 0 ? workers : omp_get_max_threads();
#else
    return 1;
#endif
}

struct PendingFailure {
    bool failed = false;
    std::uint64_t index = 0;
    schemes::PathState state;
    std::uint64_t limit = 0;
};

// One simulated path per index j, stream derive(seed, j); results land in
// per-path slots so the later reduction is in path order no matter how the
// loop was scheduled.
template <typename PathFn>
void fill_paths_parallel(std::size_t n_samples, int workers, const PathFn& path,
                         std::span<double> payoffs, std::span<double> steps) {
    PendingFailure fail;
    std::atomic<bool> any_failed{false};
    const long long count = static_cast<long long>(n_samples);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_workers(workers))
#endif
    for (long long j = 0; j < count; ++j) {
        if (any_failed.load(std::memory_order_relaxed)) continue;
        try {
            const auto out = path(static_cast<std::uint64_t>(j));
            payoffs[j] = out.payoff;
            steps[j] = static_cast<double>(out.steps);
        } catch (const schemes::MaxStepsExceeded& e) {
#ifdef _OPENMP
#pragma omp critical(stablemc_mc_failure)
#endif
            {
                if (!fail.failed || static_cast<std::uint64_t>(j) < fail.index) {
                    fail.failed = true;
                    fail.index = static_cast<std::uint64_t>(j);
                    fail.state = e.state;
                    fail.limit = e.limit;
                }
            }
            any_failed.store(true, std::memory_order_relaxed);
        }
    }
    if (fail.failed)
        throw PathFailure(fail.index,
                          schemes::MaxStepsExceeded(fail.state, fail.limit));
}

template <typename PathFn>
void fill_paths_serial(std::size_t n_samples, const PathFn& path,
                       std::span<double> payoffs, std::span<double> steps) {
    for (std::uint64_t j = 0; j < n_samples; ++j) {
        try {
            const auto out = path(j);
            payoffs[j] = out.payoff;
            steps[j] = static_cast<double>(out.steps);
        } catch (const schemes::MaxStepsExceeded& e) {
            throw PathFailure(j, e);
        }
    }
}

template <typename Fill>
EstimatorReport reduce_run(std::size_t n_samples, std::uint64_t seed,
                           const Fill& fill) {
    if (n_samples < 1)
        throw std::invalid_argument("estimate: need at least one sample");
    std::vector<double> payoffs(n_samples);
    std::vector<double> steps(n_samples);

    const auto start = std::chrono::steady_clock::now();
    fill(payoffs, steps);
    const auto stop = std::chrono::steady_clock::now();

    const Summary sum = summarize(payoffs);
    Kahan step_acc;
    for (const double v : steps) step_acc.add(v);

    EstimatorReport rep;
    rep.mean = sum.mean;
    rep.std_error = sum.std_error;
    rep.n_samples = n_samples;
    rep.avg_steps = step_acc.total() / static_cast<double>(n_samples);
    rep.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
    rep.seed = seed;
    return rep;
}

// Normalise an initial-value spec to the terminal-value form the simulators
// expect: v(t0, x) equals u(T - t0, x) of the reversed problem.
void normalise_orientation(const problems::ProblemSpec*& p, double& t0,
                           problems::ProblemSpec& storage) {
    if (p->orientation == problems::Orientation::initial_value) {
        storage = problems::reverse_time(*p);
        t0 = p->horizon - t0;
        p = &storage;
    }
}

}  // namespace

PathFailure::PathFailure(std::uint64_t index, schemes::MaxStepsExceeded cause)
    : std::runtime_error("path " + std::to_string(index) + ": " + cause.what()),
      path_index(index),
      state(std::move(cause.state)) {}

Summary summarize(std::span<const double> payoffs) {
    if (payoffs.empty())
        throw std::invalid_argument("summarize: empty sample");
    Summary s;
    s.mean = pivoted_mean(payoffs);
    s.min = s.max = payoffs[0];
    Kahan sq;
    for (const double x : payoffs) {
        const double d = x - s.mean;
        sq.add(d * d);
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    const std::size_t n = payoffs.size();
    s.std_error =
        n > 1 ? std::sqrt(sq.total() / static_cast<double>(n - 1) /
                          static_cast<double>(n))
              : 0.0;
    return s;
}

EstimatorReport estimate(const problems::ProblemSpec& p,
                         const schemes::SchemeConfig& cfg, double t0,
                         std::span<const double> x0, std::size_t n_samples,
                         std::uint64_t seed, int workers) {
    problems::ProblemSpec storage;
    const problems::ProblemSpec* spec = &p;
    normalise_orientation(spec, t0, storage);
    const auto np = levy::make_params(spec->n, spec->s, cfg.eps);
    auto path = [&](std::uint64_t j) {
        auto rng = RngStream::derive(seed, j);
        return schemes::simulate_path(*spec, cfg, np, t0, x0, rng);
    };
    return reduce_run(n_samples, seed, [&](std::span<double> pay, std::span<double> st) {
        fill_paths_parallel(n_samples, workers, path, pay, st);
    });
}

EstimatorReport estimate_serial(const problems::ProblemSpec& p,
                                const schemes::SchemeConfig& cfg, double t0,
                                std::span<const double> x0,
                                std::size_t n_samples, std::uint64_t seed) {
    problems::ProblemSpec storage;
    const problems::ProblemSpec* spec = &p;
    normalise_orientation(spec, t0, storage);
    const auto np = levy::make_params(spec->n, spec->s, cfg.eps);
    auto path = [&](std::uint64_t j) {
        auto rng = RngStream::derive(seed, j);
        return schemes::simulate_path(*spec, cfg, np, t0, x0, rng);
    };
    return reduce_run(n_samples, seed, [&](std::span<double> pay, std::span<double> st) {
        fill_paths_serial(n_samples, path, pay, st);
    });
}

EstimatorReport estimate_steady(const problems::SteadyProblemSpec& p,
                                const schemes::SchemeConfig& cfg,
                                std::span<const double> x0,
                                std::size_t n_samples, std::uint64_t seed,
                                int workers) {
    const auto np = levy::make_params(p.n, p.s, cfg.eps);
    auto path = [&](std::uint64_t j) {
        auto rng = RngStream::derive(seed, j);
        return schemes::simulate_path_steady(p, cfg, np, x0, rng);
    };
    return reduce_run(n_samples, seed, [&](std::span<double> pay, std::span<double> st) {
        fill_paths_parallel(n_samples, workers, path, pay, st);
    });
}

}  // namespace stablemc::montecarlo
