#pragma once

#include <span>

#include "stablemc/rng.hpp"

namespace stablemc::levy {

/// Derived sampling constants of the truncated isotropic 2s-stable process
/// for a given (n, s, eps).  Immutable and freely shareable across threads.
struct StableNoiseParams {
    int n = 0;               ///< space dimension
    double s = 0.0;          ///< stability half-index, in (0,1)
    double eps = 0.0;        ///< truncation level, in (0,1)
    double c_ns = 0.0;       ///< C(n,s), Levy measure normalisation
    double lambda_eps = 0.0; ///< jump intensity of {|y| > eps}
    double sigma_bar = 0.0;  ///< per-axis std-dev scale of the removed band
};

/// Populate all derived constants:
///   lambda_eps = 2^{2s} Gamma(n/2+s) eps^{-2s} / (Gamma(1-s) Gamma(n/2))
///   sigma_bar^2 = C(n,s) eps^{2-2s} / (2-2s) * pi^{n/2} / Gamma(n/2+1)
/// Throws std::domain_error when s or eps falls outside (0,1).
StableNoiseParams make_params(int n, double s, double eps);

/// Waiting time to the next jump: Exp(lambda_eps) via inverse CDF
/// -log(U)/lambda_eps with U ~ Uniform(0,1].
double sample_jump_time(RngStream& rng, const StableNoiseParams& params);

/// One jump of the truncated process, written into `out` (length n).
/// Radius R = eps * U^{-1/(2s)} (inverse CDF of the normalised tail law,
/// P(R > r) = (eps/r)^{2s}); direction is a normalised standard Gaussian
/// vector, uniform on the sphere.  Radii are unbounded above by design.
///
/// The driving process keeps the band eps < |y| < 1 in compensated form,
/// but the compensator vanishes: nu is symmetric, so the drift correction
/// int y nu(dy) over any symmetric set is zero.  The truncated process is
/// therefore exactly compound Poisson with rate lambda_eps and this jump
/// law, which is what gets sampled here.
void sample_jump(RngStream& rng, const StableNoiseParams& params,
                 std::span<double> out);

/// Vector of independent +-1 entries with probability 1/2 each.
void sample_rademacher(RngStream& rng, std::span<double> out);

}  // namespace stablemc::levy
