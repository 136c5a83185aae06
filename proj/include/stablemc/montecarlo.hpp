#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "stablemc/schemes.hpp"

namespace stablemc::montecarlo {

/// Monte Carlo summary of one estimation run.  mean is exactly the
/// arithmetic mean of the N payoffs (compensated summation); std_error is
/// the sample standard deviation over sqrt(N), zero iff all payoffs are
/// equal.  elapsed_seconds is wall clock around the sampling loop only.
struct EstimatorReport {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    double avg_steps = 0.0;
    double elapsed_seconds = 0.0;
    std::uint64_t seed = 0;
};

struct Summary {
    double mean = 0.0;
    double std_error = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Mean, standard error (unbiased variance, N-1 divisor; zero for N = 1),
/// minimum and maximum of a non-empty sample.  Compensated summation with a
/// pivot, so constant samples reproduce the constant exactly.
Summary summarize(std::span<const double> payoffs);

/// Wraps a per-path MaxStepsExceeded with the failing path index.
struct PathFailure : std::runtime_error {
    PathFailure(std::uint64_t index, schemes::MaxStepsExceeded cause);
    std::uint64_t path_index;
    schemes::PathState state;
};

/// Estimate u(t0, x0) by averaging N simulated paths, path j drawing from
/// RngStream::derive(seed, j).  Work is split over OpenMP workers by static
/// path-index ranges and reduced in path order afterwards, so the result is
/// bit-identical for every worker count (workers <= 0 selects the runtime
/// default).  An initial-value spec is transposed to terminal-value form
/// (with t0 -> T - t0) before sampling.
EstimatorReport estimate(const problems::ProblemSpec& p,
                         const schemes::SchemeConfig& cfg, double t0,
                         std::span<const double> x0, std::size_t n_samples,
                         std::uint64_t seed, int workers = 0);

/// Plain single-threaded reference implementation of estimate(); kept for
/// testing and benchmarking the parallel kernel against.  Produces
/// bit-identical reports.
EstimatorReport estimate_serial(const problems::ProblemSpec& p,
                                const schemes::SchemeConfig& cfg, double t0,
                                std::span<const double> x0,
                                std::size_t n_samples, std::uint64_t seed);

/// Steady-state counterpart of estimate().
EstimatorReport estimate_steady(const problems::SteadyProblemSpec& p,
                                const schemes::SchemeConfig& cfg,
                                std::span<const double> x0,
                                std::size_t n_samples, std::uint64_t seed,
                                int workers = 0);

}  // namespace stablemc::montecarlo
