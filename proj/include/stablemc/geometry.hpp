#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace stablemc {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double norm_sq(std::span<const double> x) { return dot(x, x); }

namespace geometry {

/// Bounded spatial domain.  Either a ball (closed-form exit arithmetic) or a
/// general region given by an interior predicate plus a bounding ball.
/// Membership uses first-exit semantics: the boundary counts as outside, so
/// a trajectory traced to its first boundary contact is already "exited".
class Domain {
public:
    /// Zero-dimensional placeholder; any use throws until a real domain is
    /// assigned via ball() or general().
    Domain() = default;

    static Domain ball(std::vector<double> center, double radius);

    /// `inside` must return true exactly on the open interior and must imply
    /// membership of the bounding ball.
    static Domain general(std::function<bool(std::span<const double>)> inside,
                          std::vector<double> bounding_center,
                          double bounding_radius);

    int dimension() const { return static_cast<int>(center_.size()); }
    bool is_ball() const { return !inside_; }

    /// True iff x lies in the open interior.  Throws on dimension mismatch.
    bool contains(std::span<const double> x) const;

    /// Ball accessors double as the bounding ball of a general domain.
    std::span<const double> center() const { return center_; }
    double radius() const { return radius_; }

private:
    std::vector<double> center_;
    double radius_ = 0.0;
    std::function<bool(std::span<const double>)> inside_;  // empty for balls
};

/// First exit time of the segment x0 + delta * v, delta in (0, dt_max].
/// Returns the smallest such delta placing the point on (or numerically
/// past) the boundary, or nullopt when the segment stays strictly inside.
/// Balls use the positive root of the quadratic |x0 + delta v|^2 = r^2;
/// general domains scan `scan_k` equal subintervals for the first interior
/// -> exterior flip and bisect it down to 1e-12.
/// Requires contains(x0); v = 0 returns nullopt.  dt_max may be infinite
/// (steady-state problems); general domains then bound the scan window by
/// the exit of the bounding ball.
std::optional<double> first_exit_linear(const Domain& dom,
                                        std::span<const double> x0,
                                        std::span<const double> v,
                                        double dt_max, int scan_k = 64);

/// First exit time of the curve x0 + delta * b + sqrt(delta) * w,
/// delta in (0, dt_max].  Substituting u = sqrt(delta) gives a smooth curve
/// in u (a quartic for balls); the first sign change of interior-ness over
/// `scan_k` equal subintervals of [0, sqrt(dt_max)] is bisected to
/// |u - u*| <= 1e-12.  A curve that exits and re-enters within one
/// subinterval can be missed; at the truncation levels of interest that
/// event is below the schemes' bias.  w = 0 reduces to first_exit_linear.
std::optional<double> first_exit_sqrt(const Domain& dom,
                                      std::span<const double> x0,
                                      std::span<const double> b,
                                      std::span<const double> w,
                                      double dt_max, int scan_k = 64);

}  // namespace geometry
}  // namespace stablemc
