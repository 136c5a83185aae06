#pragma once

#include <functional>
#include <span>
#include <string>

#include "stablemc/geometry.hpp"

namespace stablemc::problems {

/// Time orientation of the problem data.  terminal_value prescribes the
/// solution at t = T; initial_value is the time-reversed form with
/// b~(t,x) = -b(T-t,x), c~ = -c(T-t,x), f~ = -f(T-t,x), chi~(t,x) = chi(T-t,x).
enum class Orientation { terminal_value, initial_value };

using DriftFn = std::function<void(double t, std::span<const double> x,
                                   std::span<double> out)>;
using ScalarFn = std::function<double(double t, std::span<const double> x)>;
using SpatialFn = std::function<double(std::span<const double> x)>;

/// Full problem data for the parabolic equation on [0,T] x D.  Coefficients
/// are pure callbacks: they must not mutate state and must be callable
/// concurrently from many paths.  chi is evaluated on the complement of D
/// including the boundary.
struct ProblemSpec {
    int n = 0;
    double s = 0.5;
    double horizon = 1.0;  ///< T
    geometry::Domain domain;
    DriftFn drift;        ///< b(t, x), writes an n-vector
    ScalarFn potential;   ///< c(t, x)
    ScalarFn source;      ///< f(t, x)
    SpatialFn terminal;   ///< g(x), data at t = T on D
    ScalarFn exterior;    ///< chi(t, x) on [0,T] x (R^n \ D) and on the boundary
    Orientation orientation = Orientation::terminal_value;
};

/// Steady-state Dirichlet problem data; g supplies the exterior values.
struct SteadyProblemSpec {
    int n = 0;
    double s = 0.5;
    geometry::Domain domain;
    std::function<void(std::span<const double>, std::span<double>)> drift;
    SpatialFn potential;
    SpatialFn source;
    SpatialFn exterior;  ///< g(x) on R^n \ D
};

/// A worked example with a known closed-form solution, usable for exact
/// error measurement.  `exact` is defined on all of [0,T] x R^n and agrees
/// with g at t = T inside D and with chi outside.
struct ExampleCase {
    std::string id;          ///< example1 | example2 | example3i1 | example3i2
    int n = 0;
    double s = 0.5;
    int variant = 0;         ///< the index i of example 3; 0 otherwise
    double smoothness_beta = 0.0;  ///< spatial Holder exponent of the solution
    ProblemSpec problem;
    std::function<double(double, std::span<const double>)> exact;
};

/// Heat-type problem on the unit ball with b = c = 0, chi = 0 and solution
/// u = t (1-|x|^2)^{1+s}; T = 1.
ExampleCase build_example1(int n, double s);

/// Full-coefficient problem on the unit ball with b_j = t sin(x_j),
/// c = e^t / (1 + e^{-|x|}), chi = t and solution u = t (1-|x|^2)^{1+s} + t;
/// T = 1.
ExampleCase build_example2(int n, double s);

/// Smoother heat-type family on the unit ball indexed by i in {1,2}, with
/// solution u_i = t (1-|x|^2)^{1+i+s}; T = 1.  The forcing is
///   f_i = -(1-|x|^2)^{1+i+s}
///         - C(n,s) B(-s, i+s+2) pi^{n/2} / Gamma(n/2)
///           * 2F1(s + n/2, -i-1; n/2; |x|^2) * t.
/// With fixed_exponent_rhs the first term uses the fixed exponent 2+s for
/// both i instead of tracking i; that variant is inconsistent with u_2 and
/// exists only for comparison runs.
ExampleCase build_example3(int n, double s, int i, bool fixed_exponent_rhs = false);

/// Dispatch by id: example1, example2, example3i1, example3i2.
/// Throws std::invalid_argument on unknown ids.
ExampleCase build_example(const std::string& id, int n, double s,
                          bool fixed_exponent_rhs = false);

/// Time reversal between the two orientations.  Applying it twice gives a
/// spec pointwise-equal to the original.
ProblemSpec reverse_time(const ProblemSpec& p);

}  // namespace stablemc::problems
