#include "stablemc/schemes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stablemc/geometry.hpp"

namespace stablemc::schemes {

namespace {

using geometry::first_exit_linear;
using geometry::first_exit_sqrt;

enum SegmentEnd { kHorizon, kJump, kCap };

struct Workspace {
    explicit Workspace(int n) : drift(n), shake(n), jump(n), probe(n) {}
    std::vector<double> drift;  // b(tau_i, x_i)
    std::vector<double> shake;  // sigma_bar * xi (scheme 2)
    std::vector<double> jump;
    std::vector<double> probe;  // candidate exit state
};

// Segment state x(dt) = x + dt*b (+ sqrt(dt)*w), written into out.
void segment_state(std::span<const double> x, std::span<const double> b,
                   const double* w, double dt, std::span<double> out) {
    if (w) {
        const double rt = std::sqrt(dt);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = x[i] + dt * b[i] + rt * w[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + dt * b[i];
    }
}

// Evaluate the exit state at delta and, if rounding re-derived it a hair
// inside, creep delta upward by ulps until the point is genuinely outside.
// The closed-form ball root and the bisection bracket are both accurate to
// ~1 ulp, so this terminates in a step or two.
double settle_exit(const geometry::Domain& dom, std::span<const double> x,
                   std::span<const double> b, const double* w, double delta,
                   std::span<double> probe) {
    segment_state(x, b, w, delta, probe);
    int guard = 0;
    while (dom.contains(probe)) {
        delta = std::nextafter(delta, std::numeric_limits<double>::infinity());
        if (++guard % 16 == 0) delta *= 1.0 + 1e-15 * guard;
        if (guard > 512)
            throw std::logic_error("settle_exit: could not leave the domain");
        segment_state(x, b, w, delta, probe);
    }
    return delta;
}

PathOutcome run_parabolic(const problems::ProblemSpec& p,
                          const SchemeConfig& cfg,
                          const levy::StableNoiseParams& np, double t0,
                          std::span<const double> x0, RngStream& rng,
                          bool small_jump_term) {
    if (p.orientation != problems::Orientation::terminal_value)
        throw std::invalid_argument(
            "simulate_path: spec must be in terminal-value orientation "
            "(apply reverse_time first)");
    if (np.n != p.n)
        throw std::invalid_argument("simulate_path: params dimension mismatch");
    if (!(t0 >= 0.0 && t0 < p.horizon))
        throw std::invalid_argument("simulate_path: t0 must lie in [0, T)");
    if (!p.domain.contains(x0))
        throw std::invalid_argument("simulate_path: x0 must lie inside the domain");

    const int n = p.n;
    Workspace ws(n);
    double t = t0;
    std::vector<double> x(x0.begin(), x0.end());
    double y = 1.0;
    double z = 0.0;
    std::uint64_t steps = 0;

    const double sigma = small_jump_term ? np.sigma_bar : 0.0;
    const bool capped = small_jump_term && cfg.dt_cap.has_value();

    PathOutcome out;
    while (true) {
        if (steps >= cfg.max_steps)
            throw MaxStepsExceeded({t, x, y, z, steps}, cfg.max_steps);

        const double tau = levy::sample_jump_time(rng, np);
        ++steps;  // every drawn jump time counts, truncated or not

        // Small-jump surrogate for this segment.  Skipped when sigma == 0 so
        // the degenerate scheme consumes the same draws as scheme 1.
        const double* w = nullptr;
        if (sigma != 0.0) {
            levy::sample_rademacher(rng, ws.shake);
            for (auto& v : ws.shake) v *= sigma;
            w = ws.shake.data();
        }

        p.drift(t, x, ws.drift);

        // Segment length until whatever comes first: the jump, the optional
        // step cap, or the horizon.  Ties at the horizon stop there (a jump
        // must fire strictly before T to be applied).
        const double horizon_dt = p.horizon - t;
        double seg_dt = tau;
        SegmentEnd end = kJump;
        if (capped && *cfg.dt_cap < seg_dt) {
            seg_dt = *cfg.dt_cap;
            end = kCap;
        }
        if (horizon_dt <= seg_dt) {
            seg_dt = horizon_dt;
            end = kHorizon;
        }

        // Exit the moment the inter-jump motion first touches the boundary.
        const auto hit =
            w ? first_exit_sqrt(p.domain, x, ws.drift, ws.shake, seg_dt, cfg.scan_k)
              : first_exit_linear(p.domain, x, ws.drift, seg_dt, cfg.scan_k);

        const double c_val = p.potential(t, x);
        const double f_val = p.source(t, x);

        if (hit) {
            const double delta = settle_exit(p.domain, x, ws.drift, w, *hit, ws.probe);
            z += f_val * y * delta;
            y *= 1.0 + c_val * delta;
            t += delta;
            x = ws.probe;
            out.reason = StopReason::drift_exit;
            out.payoff = p.exterior(t, x) * y + z;
            break;
        }

        if (end == kHorizon) {
            z += f_val * y * horizon_dt;
            y *= 1.0 + c_val * horizon_dt;
            segment_state(x, ws.drift, w, horizon_dt, ws.probe);
            x = ws.probe;
            t = p.horizon;
            out.reason = StopReason::horizon;
            out.payoff = p.terminal(x) * y + z;
            break;
        }

        // Advance to the grid point (jump time or cap).
        z += f_val * y * seg_dt;
        y *= 1.0 + c_val * seg_dt;
        segment_state(x, ws.drift, w, seg_dt, ws.probe);
        x = ws.probe;
        t += seg_dt;

        if (end == kJump) {
            levy::sample_jump(rng, np, ws.jump);
            for (int i = 0; i < n; ++i) x[i] += ws.jump[i];
            if (!p.domain.contains(x)) {
                out.reason = StopReason::jump_exit;
                out.payoff = p.exterior(t, x) * y + z;
                break;
            }
        }

        // Rounding of t can land exactly on T even though seg_dt < horizon_dt.
        if (t >= p.horizon) {
            t = p.horizon;
            out.reason = StopReason::horizon;
            out.payoff = p.terminal(x) * y + z;
            break;
        }
    }

    out.stop_time = t;
    out.stop_x = std::move(x);
    out.y = y;
    out.z = z;
    out.steps = steps;
    return out;
}

}  // namespace

MaxStepsExceeded::MaxStepsExceeded(PathState partial, std::uint64_t lim)
    : std::runtime_error("path exceeded max_steps = " + std::to_string(lim) +
                         " (lambda_eps too large for the step budget)"),
      state(std::move(partial)),
      limit(lim) {}

PathOutcome simulate_path_scheme1(const problems::ProblemSpec& p,
                                  const SchemeConfig& cfg,
                                  const levy::StableNoiseParams& params,
                                  double t0, std::span<const double> x0,
                                  RngStream& rng) {
    return run_parabolic(p, cfg, params, t0, x0, rng, /*small_jump_term=*/false);
}

PathOutcome simulate_path_scheme2(const problems::ProblemSpec& p,
                                  const SchemeConfig& cfg,
                                  const levy::StableNoiseParams& params,
                                  double t0, std::span<const double> x0,
                                  RngStream& rng) {
    return run_parabolic(p, cfg, params, t0, x0, rng, /*small_jump_term=*/true);
}

PathOutcome simulate_path(const problems::ProblemSpec& p, const SchemeConfig& cfg,
                          const levy::StableNoiseParams& params, double t0,
                          std::span<const double> x0, RngStream& rng) {
    return cfg.scheme == Scheme::remove_small_jumps
               ? simulate_path_scheme1(p, cfg, params, t0, x0, rng)
               : simulate_path_scheme2(p, cfg, params, t0, x0, rng);
}

PathOutcome simulate_path_scheme1(const problems::ProblemSpec& p,
                                  const SchemeConfig& cfg, double t0,
                                  std::span<const double> x0, RngStream& rng) {
    return simulate_path_scheme1(p, cfg, levy::make_params(p.n, p.s, cfg.eps),
                                 t0, x0, rng);
}

PathOutcome simulate_path_scheme2(const problems::ProblemSpec& p,
                                  const SchemeConfig& cfg, double t0,
                                  std::span<const double> x0, RngStream& rng) {
    return simulate_path_scheme2(p, cfg, levy::make_params(p.n, p.s, cfg.eps),
                                 t0, x0, rng);
}

PathOutcome simulate_path_steady(const problems::SteadyProblemSpec& p,
                                 const SchemeConfig& cfg,
                                 const levy::StableNoiseParams& params,
                                 std::span<const double> x0, RngStream& rng) {
    if (params.n != p.n)
        throw std::invalid_argument("simulate_path_steady: params dimension mismatch");
    if (!p.domain.contains(x0))
        throw std::invalid_argument("simulate_path_steady: x0 must lie inside the domain");

    const int n = p.n;
    Workspace ws(n);
    double t = 0.0;
    std::vector<double> x(x0.begin(), x0.end());
    double y = 1.0;
    double z = 0.0;
    std::uint64_t steps = 0;

    PathOutcome out;
    while (true) {
        if (steps >= cfg.max_steps)
            throw MaxStepsExceeded({t, x, y, z, steps}, cfg.max_steps);

        const double tau = levy::sample_jump_time(rng, params);
        ++steps;
        p.drift(x, ws.drift);

        const auto hit = first_exit_linear(p.domain, x, ws.drift, tau, cfg.scan_k);
        const double c_val = p.potential(x);
        const double f_val = p.source(x);

        if (hit) {
            const double delta =
                settle_exit(p.domain, x, ws.drift, nullptr, *hit, ws.probe);
            z += f_val * y * delta;
            y *= 1.0 + c_val * delta;
            t += delta;
            x = ws.probe;
            out.reason = StopReason::drift_exit;
            break;
        }

        z += f_val * y * tau;
        y *= 1.0 + c_val * tau;
        segment_state(x, ws.drift, nullptr, tau, ws.probe);
        x = ws.probe;
        t += tau;

        levy::sample_jump(rng, params, ws.jump);
        for (int i = 0; i < n; ++i) x[i] += ws.jump[i];
        if (!p.domain.contains(x)) {
            out.reason = StopReason::jump_exit;
            break;
        }
    }

    out.payoff = p.exterior(x) * y + z;
    out.stop_time = t;
    out.stop_x = std::move(x);
    out.y = y;
    out.z = z;
    out.steps = steps;
    return out;
}

}  // namespace stablemc::schemes
