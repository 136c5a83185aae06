#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stablemc/geometry.hpp"
#include "stablemc/rng.hpp"

using namespace stablemc;
using geometry::Domain;
using geometry::first_exit_linear;
using geometry::first_exit_sqrt;

namespace {

Domain unit_ball(int n) { return Domain::ball(std::vector<double>(n, 0.0), 1.0); }

// axis-aligned cube (-h, h)^n wrapped as a general domain
Domain cube(int n, double h) {
    return Domain::general(
        [h](std::span<const double> x) {
            for (const double v : x)
                if (!(std::abs(v) < h)) return false;
            return true;
        },
        std::vector<double>(n, 0.0), h * std::sqrt(static_cast<double>(n)) + 1e-9);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("membership: boundary counts as outside") {
    const auto ball = unit_ball(2);
    CHECK(ball.contains(std::vector<double>{0.0, 0.0}));
    CHECK_FALSE(ball.contains(std::vector<double>{1.0, 0.0}));
    CHECK_FALSE(ball.contains(std::vector<double>{0.8, 0.8}));
    for (const int n : {1, 2, 10, 100}) {
        const auto b = unit_ball(n);
        const std::vector<double> x(n, 0.5 / n);
        CHECK(b.contains(x));
    }
    CHECK_THROWS_AS(ball.contains(std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("linear exit: pinned cases") {
    const auto ball = unit_ball(2);
    const auto d1 = first_exit_linear(ball, std::vector<double>{0.9, 0.0},
                                      std::vector<double>{1.0, 0.0}, 1.0);
    REQUIRE(d1.has_value());
    CHECK(*d1 == doctest::Approx(0.1).epsilon(1e-12));

    CHECK_FALSE(first_exit_linear(ball, std::vector<double>{0.0, 0.0},
                                  std::vector<double>{0.0, 0.0}, 1.0)
                    .has_value());

    // from (0.5, 0) straight up: 0.25 + d^2 = 1
    const auto d2 = first_exit_linear(ball, std::vector<double>{0.5, 0.0},
                                      std::vector<double>{0.0, 1.0}, 10.0);
    REQUIRE(d2.has_value());
    CHECK(*d2 == doctest::Approx(0.8660254037844386).epsilon(1e-12));

    // stays inside within the window
    CHECK_FALSE(first_exit_linear(ball, std::vector<double>{0.5, 0.0},
                                  std::vector<double>{0.0, 1.0}, 0.5)
                    .has_value());
}

TEST_CASE("linear exit lands on the sphere and ignores the window size") {
    const auto ball = unit_ball(3);
    auto rng = RngStream::derive(3, 0);
    std::vector<double> x0(3), v(3), hit(3);
    for (int k = 0; k < 2000; ++k) {
        for (auto& c : x0) c = (2.0 * rng.next_uniform() - 1.0) * 0.57;
        for (auto& c : v) c = 2.0 * rng.next_uniform() - 1.0;
        REQUIRE(ball.contains(x0));
        const auto d = first_exit_linear(ball, x0, v, 1e12);
        REQUIRE(d.has_value());
        for (int i = 0; i < 3; ++i) hit[i] = x0[i] + *d * v[i];
        CHECK(std::abs(std::sqrt(norm_sq(hit)) - 1.0) <= 1e-12);
        const auto wider = first_exit_linear(ball, x0, v, 1e13);
        REQUIRE(wider.has_value());
        CHECK(*wider == *d);
        // a window that ends before the crossing yields none
        const auto shorter = first_exit_linear(ball, x0, v, *d * 0.5);
        CHECK_FALSE(shorter.has_value());
    }
}

TEST_CASE("sqrt exit: pinned cases") {
    const auto ball = unit_ball(2);
    const std::vector<double> zero{0.0, 0.0};

    // pure sqrt(t) motion from the centre exits when sqrt(d) = 1
    const auto d1 = first_exit_sqrt(ball, zero, zero,
                                    std::vector<double>{1.0, 0.0}, 4.0);
    REQUIRE(d1.has_value());
    CHECK(*d1 == doctest::Approx(1.0).epsilon(1e-10));

    // 0.9 + 0.05 sqrt(d) reaches 1 only at d = 4 > dt_max
    CHECK_FALSE(first_exit_sqrt(ball, std::vector<double>{0.9, 0.0}, zero,
                                std::vector<double>{0.05, 0.0}, 1.0)
                    .has_value());
}

TEST_CASE("sqrt exit reduces to the linear exit when w = 0") {
    const auto ball = unit_ball(2);
    const std::vector<double> zero{0.0, 0.0};
    auto rng = RngStream::derive(5, 0);
    std::vector<double> x0(2), b(2);
    for (int k = 0; k < 1000; ++k) {
        for (auto& c : x0) c = (2.0 * rng.next_uniform() - 1.0) * 0.7;
        for (auto& c : b) c = 4.0 * (2.0 * rng.next_uniform() - 1.0);
        const auto lin = first_exit_linear(ball, x0, b, 2.0);
        const auto sq = first_exit_sqrt(ball, x0, b, zero, 2.0);
        REQUIRE(lin.has_value() == sq.has_value());
        if (lin) CHECK(std::abs(*lin - *sq) <= 1e-10);
    }
}

TEST_CASE("sqrt exit honours first-crossing semantics") {
    const auto ball = unit_ball(2);
    auto rng = RngStream::derive(9, 0);
    std::vector<double> x0(2), b(2), w(2), probe(2);
    int found = 0;
    for (int k = 0; k < 500; ++k) {
        for (auto& c : x0) c = (2.0 * rng.next_uniform() - 1.0) * 0.6;
        for (auto& c : b) c = 2.0 * (2.0 * rng.next_uniform() - 1.0);
        for (auto& c : w) c = 1.5 * (2.0 * rng.next_uniform() - 1.0);
        const auto d = first_exit_sqrt(ball, x0, b, w, 1.0);
        if (!d) continue;
        ++found;
        // every scanned point strictly before the crossing is interior
        for (int j = 1; j <= 32; ++j) {
            const double dt = *d * (j / 33.0);
            const double rt = std::sqrt(dt);
            for (int i = 0; i < 2; ++i) probe[i] = x0[i] + dt * b[i] + rt * w[i];
            CHECK(ball.contains(probe));
        }
    }
    CHECK(found > 50);
}

TEST_CASE("general domains: scan+bisect against the analytic crossing") {
    const auto box = cube(2, 0.5);
    CHECK(box.contains(std::vector<double>{0.0, 0.0}));
    CHECK_FALSE(box.contains(std::vector<double>{0.5, 0.0}));

    // axis ray from (0.3, 0): crossing at 0.2
    const auto d = first_exit_linear(box, std::vector<double>{0.3, 0.0},
                                     std::vector<double>{1.0, 0.0}, 1.0);
    REQUIRE(d.has_value());
    CHECK(*d == doctest::Approx(0.2).epsilon(1e-9));

    // sqrt motion along the axis: 0.3 + 0.1 d + 0.2 sqrt(d) = 0.5
    const auto d2 = first_exit_sqrt(box, std::vector<double>{0.3, 0.0},
                                    std::vector<double>{0.1, 0.0},
                                    std::vector<double>{0.2, 0.0}, 4.0);
    REQUIRE(d2.has_value());
    // u = sqrt(d): 0.1 u^2 + 0.2 u - 0.2 = 0 -> u = (-1 + sqrt(3)) and d = u^2
    const double u = std::sqrt(3.0) - 1.0;
    CHECK(*d2 == doctest::Approx(u * u).epsilon(1e-9));

    // unbounded window falls back to the bounding-ball cutoff
    const auto d3 = first_exit_linear(box, std::vector<double>{0.3, 0.0},
                                      std::vector<double>{1.0, 0.0},
                                      std::numeric_limits<double>::infinity());
    REQUIRE(d3.has_value());
    CHECK(*d3 == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("degenerate inputs return none rather than erroring") {
    const auto ball = unit_ball(2);
    const std::vector<double> x0{0.3, 0.3};
    const std::vector<double> zero{0.0, 0.0};
    CHECK_FALSE(first_exit_linear(ball, x0, zero, 5.0).has_value());
    CHECK_FALSE(first_exit_sqrt(ball, x0, zero, zero, 5.0).has_value());
    CHECK_THROWS_AS(first_exit_linear(ball, x0, zero, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
