#include "stablemc/levy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stablemc/geometry.hpp"
#include "stablemc/specfun.hpp"

namespace stablemc::levy {

StableNoiseParams make_params(int n, double s, double eps) {
    if (n < 1) throw std::domain_error("make_params: dimension must be >= 1");
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("make_params: s must lie in (0,1)");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("make_params: eps must lie in (0,1)");

    using specfun::gamma_fn;
    const double half_n = 0.5 * n;
    const double c_ns = specfun::stable_constant(n, s);
    const double lambda = std::pow(2.0, 2.0 * s) * gamma_fn(half_n + s) *
                          std::pow(eps, -2.0 * s) /
                          (gamma_fn(1.0 - s) * gamma_fn(half_n));
    const double sigma_sq = c_ns * std::pow(eps, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) *
                            std::pow(std::numbers::pi, half_n) / gamma_fn(half_n + 1.0);
    return {n, s, eps, c_ns, lambda, std::sqrt(sigma_sq)};
}

double sample_jump_time(RngStream& rng, const StableNoiseParams& params) {
    return -std::log(rng.next_uniform()) / params.lambda_eps;
}

void sample_jump(RngStream& rng, const StableNoiseParams& params,
                 std::span<double> out) {
    // Direction: normalised standard Gaussian vector (uniform on S^{n-1});
    // a zero-norm draw is redrawn.
    double nrm_sq = 0.0;
    do {
        for (auto& v : out) v = rng.next_normal();
        nrm_sq = norm_sq(out);
    } while (nrm_sq == 0.0);

    // Radius from the inverse CDF of the normalised tail measure
    // nu(dy)/lambda_eps on {|y| > eps}: P(R > r) = (eps/r)^{2s}, r >= eps.
    // No upper cap: the exit test absorbs arbitrarily large jumps.
    //
    // The compensated band eps < |y| < 1 of the driving process contributes
    // no drift here: nu is symmetric, so its compensator int y nu(dy)
    // vanishes over the band, and the truncated process is exactly compound
    // Poisson with this jump law.
    const double radius = params.eps * std::pow(rng.next_uniform(), -1.0 / (2.0 * params.s));
    const double scale = radius / std::sqrt(nrm_sq);
    for (auto& v : out) v *= scale;
}

void sample_rademacher(RngStream& rng, std::span<double> out) {
    for (auto& v : out) v = (rng.next_u64() >> 63) ? 1.0 : -1.0;
}

}  // namespace stablemc::levy
