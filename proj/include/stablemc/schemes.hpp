#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stablemc/levy.hpp"
#include "stablemc/problems.hpp"
#include "stablemc/rng.hpp"

namespace stablemc::schemes {

/// The two jump-adapted path simulators: scheme 1 removes jumps below the
/// truncation level, scheme 2 replaces them with the matched-variance term
/// sigma_bar sqrt(dt) xi driven by a Rademacher vector xi.
enum class Scheme : int {
    remove_small_jumps = 1,
    replace_small_jumps = 2,
};

struct SchemeConfig {
    Scheme scheme = Scheme::remove_small_jumps;
    double eps = 0.1;                 ///< truncation level, in (0,1)
    std::optional<double> dt_cap;     ///< extra step-size cap (scheme 2 only)
    std::uint64_t max_steps = 10'000'000;  ///< per-path safety bound
    int scan_k = 64;                  ///< exit-scan resolution
};

enum class StopReason { drift_exit, jump_exit, horizon };

/// Mutable per-path state; carried by MaxStepsExceeded for diagnostics.
struct PathState {
    double t = 0.0;
    std::vector<double> x;
    double y = 1.0;  ///< multiplicative weight
    double z = 0.0;  ///< accumulated source
    std::uint64_t steps = 0;
};

/// Result of one simulated trajectory.
/// stop_reason == horizon implies stop_time == T and payoff = g(stop_x) y + z;
/// the exit reasons imply stop_x outside the open domain and
/// payoff = chi(stop_time, stop_x) y + z.  steps counts every drawn jump
/// time, including the final truncated one.
struct PathOutcome {
    double stop_time = 0.0;
    std::vector<double> stop_x;
    double y = 1.0;
    double z = 0.0;
    double payoff = 0.0;
    std::uint64_t steps = 0;
    StopReason reason = StopReason::horizon;
};

/// Raised when a single path exceeds cfg.max_steps, typically a sign that
/// lambda_eps is too large for the step budget.  Carries the partial state.
struct MaxStepsExceeded : std::runtime_error {
    MaxStepsExceeded(PathState partial, std::uint64_t limit);
    PathState state;
    std::uint64_t limit;
};

/// Scheme 1: jump-adapted Euler path with small jumps removed.  Inter-jump
/// motion is the drift segment x + b(tau_i, x)(t - tau_i); exits are located
/// continuously along the segment (first boundary crossing).  Requires a
/// terminal-value spec, contains(x0) and t0 in [0, T).
PathOutcome simulate_path_scheme1(const problems::ProblemSpec& p,
                                  const SchemeConfig& cfg,
                                  const levy::StableNoiseParams& params,
                                  double t0, std::span<const double> x0,
                                  RngStream& rng);

/// Scheme 2: as scheme 1 but inter-jump motion carries the small-jump
/// surrogate sigma_bar sqrt(dt) xi, with a fresh Rademacher vector xi per
/// step, and the optional dt_cap truncates each step at tau_i + dt_cap.
/// With params.sigma_bar == 0 the xi draw is skipped entirely, so the
/// degenerate scheme consumes the same stream as scheme 1 and reproduces
/// its trajectories bit for bit.
PathOutcome simulate_path_scheme2(const problems::ProblemSpec& p,
                                  const SchemeConfig& cfg,
                                  const levy::StableNoiseParams& params,
                                  double t0, std::span<const double> x0,
                                  RngStream& rng);

/// Dispatch on cfg.scheme.
PathOutcome simulate_path(const problems::ProblemSpec& p,
                          const SchemeConfig& cfg,
                          const levy::StableNoiseParams& params, double t0,
                          std::span<const double> x0, RngStream& rng);

/// Convenience overloads deriving the noise constants from (p.n, p.s,
/// cfg.eps) on the fly.
PathOutcome simulate_path_scheme1(const problems::ProblemSpec& p,
                                  const SchemeConfig& cfg, double t0,
                                  std::span<const double> x0, RngStream& rng);
PathOutcome simulate_path_scheme2(const problems::ProblemSpec& p,
                                  const SchemeConfig& cfg, double t0,
                                  std::span<const double> x0, RngStream& rng);

/// Steady-state variant: scheme-1 stepping with no horizon, looping until
/// the path exits; payoff = g(stop_x) y + z.  max_steps is the only
/// safeguard against non-exiting configurations.
PathOutcome simulate_path_steady(const problems::SteadyProblemSpec& p,
                                 const SchemeConfig& cfg,
                                 const levy::StableNoiseParams& params,
                                 std::span<const double> x0, RngStream& rng);

}  // namespace stablemc::schemes
