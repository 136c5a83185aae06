#include "stablemc/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stablemc::geometry {

namespace {

constexpr double kBisectTol = 1e-12;

double dist_sq(std::span<const double> x, std::span<const double> c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - c[i];
        acc += d * d;
    }
    return acc;
}

// Positive root of |x0 + delta v - c|^2 = r^2 for x0 strictly inside the
// ball and v != 0, in a cancellation-free form.
double ball_crossing(std::span<const double> x0, std::span<const double> v,
                     std::span<const double> c, double r, double v_sq) {
    double q = 0.0;    // (x0 - c) . v
    double d_sq = 0.0; // |x0 - c|^2
    for (std::size_t i = 0; i < x0.size(); ++i) {
        const double d = x0[i] - c[i];
        q += d * v[i];
        d_sq += d * d;
    }
    const double gap = r * r - d_sq;  // > 0 strictly inside
    const double disc = std::sqrt(q * q + v_sq * gap);
    return q >= 0.0 ? gap / (disc + q) : (disc - q) / v_sq;
}

// First interior -> exterior flip of pred over (0, hi], located by scanning
// scan_k equal subintervals and bisecting the flipped one down to tol.
// Returns the outside endpoint of the final bracket, so evaluating pred at
// the returned abscissa is guaranteed false.
template <typename Pred>
std::optional<double> scan_first_crossing(const Pred& inside, double hi,
                                          int scan_k, double tol) {
    double lo = 0.0;
    double out = -1.0;
    for (int k = 1; k <= scan_k; ++k) {
        const double u = hi * k / scan_k;
        if (!inside(u)) {
            out = u;
            break;
        }
        lo = u;
    }
    if (out < 0.0) return std::nullopt;
    while (out - lo > tol) {
        const double mid = 0.5 * (lo + out);
        if (inside(mid))
            lo = mid;
        else
            out = mid;
    }
    return out;
}

}  // namespace

Domain Domain::ball(std::vector<double> center, double radius) {
    if (center.empty()) throw std::invalid_argument("Domain::ball: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius must be > 0");
    Domain d;
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
}

Domain Domain::general(std::function<bool(std::span<const double>)> inside,
                       std::vector<double> bounding_center,
                       double bounding_radius) {
    if (!inside) throw std::invalid_argument("Domain::general: missing inside predicate");
    Domain d = ball(std::move(bounding_center), bounding_radius);
    d.inside_ = std::move(inside);
    return d;
}

bool Domain::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension())
        throw std::invalid_argument("Domain::contains: dimension mismatch");
    if (inside_) return inside_(x);
    return dist_sq(x, center_) < radius_ * radius_;
}

std::optional<double> first_exit_linear(const Domain& dom,
                                        std::span<const double> x0,
                                        std::span<const double> v,
                                        double dt_max, int scan_k) {
    if (!(dt_max > 0.0)) throw std::invalid_argument("first_exit_linear: dt_max must be > 0");
    const double v_sq = norm_sq(v);
    if (v_sq == 0.0) return std::nullopt;

    if (dom.is_ball()) {
        const double delta = ball_crossing(x0, v, dom.center(), dom.radius(), v_sq);
        if (delta <= dt_max) return delta;
        return std::nullopt;
    }

    // General domains scan the predicate; an unbounded window is cut down to
    // the exit of the bounding ball (the domain cannot outlast it).
    double hi = dt_max;
    if (std::isinf(hi)) {
        const double bb = ball_crossing(x0, v, dom.center(), dom.radius(), v_sq);
        hi = bb * (1.0 + 1e-9) + 1e-300;
    }
    std::vector<double> probe(x0.size());
    auto inside_at = [&](double t) {
        for (std::size_t i = 0; i < probe.size(); ++i) probe[i] = x0[i] + t * v[i];
        return dom.contains(probe);
    };
    return scan_first_crossing(inside_at, hi, scan_k, kBisectTol);
}

std::optional<double> first_exit_sqrt(const Domain& dom,
                                      std::span<const double> x0,
                                      std::span<const double> b,
                                      std::span<const double> w,
                                      double dt_max, int scan_k) {
    if (!(dt_max > 0.0)) throw std::invalid_argument("first_exit_sqrt: dt_max must be > 0");
    if (std::isinf(dt_max))
        throw std::invalid_argument("first_exit_sqrt: dt_max must be finite");
    if (norm_sq(w) == 0.0) return first_exit_linear(dom, x0, b, dt_max, scan_k);

    const double u_max = std::sqrt(dt_max);
    if (dom.is_ball()) {
        // The whole curve stays inside when even the triangle-inequality
        // reach |x0-c| + |b| dt + |w| sqrt(dt) falls short of the radius.
        const double reach = std::sqrt(dist_sq(x0, dom.center())) +
                             std::sqrt(norm_sq(b)) * dt_max +
                             std::sqrt(norm_sq(w)) * u_max;
        if (reach < dom.radius()) return std::nullopt;
    }

    std::vector<double> probe(x0.size());
    auto inside_at = [&](double u) {
        const double d = u * u;
        for (std::size_t i = 0; i < probe.size(); ++i)
            probe[i] = x0[i] + d * b[i] + u * w[i];
        return dom.contains(probe);
    };
    const auto u_hit = scan_first_crossing(inside_at, u_max, scan_k, kBisectTol);
    if (!u_hit) return std::nullopt;
    return (*u_hit) * (*u_hit);
}

}  // namespace stablemc::geometry
