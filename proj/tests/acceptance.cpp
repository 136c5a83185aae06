// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// criterion fails.  Every tolerance is pinned here, in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stablemc/levy.hpp"
#include "stablemc/montecarlo.hpp"
#include "stablemc/problems.hpp"
#include "stablemc/rng.hpp"
#include "stablemc/studies.hpp"

using namespace stablemc;
using montecarlo::estimate;
using montecarlo::estimate_serial;
using montecarlo::estimate_steady;
using problems::build_example1;
using problems::build_example3;
using schemes::Scheme;
using schemes::SchemeConfig;

namespace {

struct Gate {
    int failures = 0;

    void report(int id, const char* name, bool pass, const std::string& detail,
                double seconds) {
        std::printf("[%s] criterion %d: %-28s %s  (%.1fs)\n",
                    pass ? "PASS" : "FAIL", id, name, detail.c_str(), seconds);
        std::fflush(stdout);
        if (!pass) ++failures;
    }

    template <typename Fn>
    void run(int id, const char* name, const Fn& fn) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        report(id, name, pass, detail, secs);
    }
};

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, format);
    std::vsnprintf(buf, sizeof buf, format, ap);
    va_end(ap);
    return buf;
}

SchemeConfig config_for(int scheme, double eps) {
    SchemeConfig cfg;
    cfg.scheme = scheme == 1 ? Scheme::remove_small_jumps : Scheme::replace_small_jumps;
    cfg.eps = eps;
    return cfg;
}

// --- criterion 1: sampler laws ---------------------------------------------

bool sampler_laws(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    double worst_lambda = 0.0, worst_sigma = 0.0;
    for (const int n : {2, 3, 10}) {
        for (const double s : {0.25, 0.5, 0.75}) {
            for (const double eps : {1.0 / 10.0, 1.0 / 40.0}) {
                const auto p = levy::make_params(n, s, eps);
                const double lam = oracles::tail_mass_quadrature(n, s, eps);
                const double mom = oracles::second_moment_quadrature(n, s, eps);
                worst_lambda = std::max(
                    worst_lambda, std::abs(p.lambda_eps - lam) / lam);
                worst_sigma = std::max(
                    worst_sigma,
                    std::abs(n * p.sigma_bar * p.sigma_bar - mom) / mom);
            }
        }
    }

    const auto params = levy::make_params(3, 0.6, 0.1);
    auto rng = RngStream::derive(1001, 0);
    const int n_draws = 100000;
    std::vector<double> radii(n_draws);
    std::vector<double> jump(3);
    for (auto& r : radii) {
        levy::sample_jump(rng, params, jump);
        r = std::sqrt(norm_sq(jump));
    }
    std::sort(radii.begin(), radii.end());
    const double ks = oracles::ks_statistic(radii, [&](double r) {
        return 1.0 - std::pow(params.eps / r, 2.0 * params.s);
    });
    const double ks_crit = 1.358 / std::sqrt(static_cast<double>(n_draws));

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    detail = fmt("rel dev: lambda %.2e, n*sigma^2 %.2e (tol 1e-10); KS %.4f < %.4f",
                 worst_lambda, worst_sigma, ks, ks_crit);
    return worst_lambda <= 1e-10 && worst_sigma <= 1e-10 && ks < ks_crit &&
           secs < 10.0;
}

// --- criterion 2: zero-variance oracle --------------------------------------

bool zero_variance(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const double value = 0.7;
    for (const int n : {2, 100}) {
        problems::ProblemSpec p;
        p.n = n;
        p.s = 0.5;
        p.horizon = 1.0;
        p.domain = geometry::Domain::ball(std::vector<double>(n, 0.0), 1.0);
        p.drift = [](double, std::span<const double>, std::span<double> out) {
            for (auto& v : out) v = 0.0;
        };
        p.potential = [](double, std::span<const double>) { return 0.0; };
        p.source = [](double, std::span<const double>) { return 0.0; };
        p.terminal = [value](std::span<const double>) { return value; };
        p.exterior = [value](double, std::span<const double>) { return value; };
        const std::vector<double> x0(n, 0.5 / n);
        for (const std::size_t n_samples : {1ul, 1000ul}) {
            for (const std::uint64_t seed : {1ull, 97ull}) {
                for (const int scheme : {1, 2}) {
                    const auto rep = estimate(p, config_for(scheme, 0.5), 0.0, x0,
                                              n_samples, seed, 0);
                    if (rep.mean != value || rep.std_error != 0.0) {
                        detail = fmt("n=%d scheme=%d N=%zu: mean %.17g stderr %.3g",
                                     n, scheme, n_samples, rep.mean, rep.std_error);
                        return false;
                    }
                }
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    detail = fmt("mean == K and stderr == 0 across dims/seeds/N (%.2fs)", secs);
    return secs < 1.0;
}

// --- criteria 3 and 7: tabulated spot value and determinism -----------------

bool table_spot(std::string& detail) {
    const auto ex = build_example1(2, 0.5);
    const std::vector<double> x0{0.5, 0.5};
    const auto rep =
        estimate(ex.problem, config_for(1, 1.0 / 40.0), 0.5, x0, 10000, 3030, 0);
    const double exact = ex.exact(0.5, x0);
    const double err = std::abs(rep.mean - exact);
    const double tol = std::max(3.0 * rep.std_error, 2.5 * 7.725e-3);
    detail = fmt("err %.3e (tol %.3e), avg steps %.2f (want 10..15)", err, tol,
                 rep.avg_steps);
    return err <= tol && rep.avg_steps >= 10.0 && rep.avg_steps <= 15.0 &&
           rep.elapsed_seconds < 60.0;
}

bool determinism(std::string& detail) {
    const auto ex = build_example1(2, 0.5);
    const std::vector<double> x0{0.5, 0.5};
    const auto cfg = config_for(1, 1.0 / 40.0);
    const auto r1 = estimate(ex.problem, cfg, 0.5, x0, 10000, 3030, 1);
    const auto r4 = estimate(ex.problem, cfg, 0.5, x0, 10000, 3030, 4);
    const auto r8 = estimate(ex.problem, cfg, 0.5, x0, 10000, 3030, 8);
    const bool same = r1.mean == r4.mean && r4.mean == r8.mean;
    detail = fmt("means %.17g / %.17g / %.17g", r1.mean, r4.mean, r8.mean);
    return same;
}

// --- criteria 4 and 5: convergence orders ------------------------------------

bool scheme1_order(std::string& detail) {
    const std::vector<double> eps{1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80, 1.0 / 160};
    const std::vector<double> x0{0.5, 0.5};
    struct Want {
        double s, target, tol;
    };
    detail.clear();
    bool ok = true;
    for (const Want w : {Want{0.25, 0.5, 0.25}, Want{0.5, 0.5, 0.25},
                         Want{0.75, 0.25, 0.15}}) {
        const auto ex = build_example1(2, w.s);
        const auto table = studies::run_study(ex, config_for(1, eps[0]), eps, 0.5,
                                              x0, 100000, 8080 + int(w.s * 100));
        const double fit = table.fitted_order.value_or(-99.0);
        if (!detail.empty()) detail += ", ";
        detail += fmt("s=%.2f: %.3f~%.2f", w.s, fit, w.target);
        ok = ok && std::abs(fit - w.target) <= w.tol;
    }
    return ok;
}

bool scheme2_order(std::string& detail) {
    const std::vector<double> eps{1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    const std::vector<double> x0{0.5, 0.5};
    struct Want {
        double s, target;
    };
    detail.clear();
    bool ok = true;
    for (const Want w : {Want{0.25, 0.5}, Want{0.5, 1.0}, Want{0.75, 0.5}}) {
        const auto ex = build_example3(2, w.s, 1);
        const auto table = studies::run_study(ex, config_for(2, eps[0]), eps, 0.5,
                                              x0, 100000, 9090 + int(w.s * 100));
        const double fit = table.fitted_order.value_or(-99.0);
        if (!detail.empty()) detail += ", ";
        detail += fmt("s=%.2f: %.3f~%.2f", w.s, fit, w.target);
        ok = ok && std::abs(fit - w.target) <= 0.25;
    }

    // the variance-matched scheme must beat plain removal at equal eps
    const auto ex = build_example3(2, 0.5, 1);
    const double exact = ex.exact(0.5, x0);
    const auto r1 =
        estimate(ex.problem, config_for(1, 1.0 / 32.0), 0.5, x0, 100000, 555, 0);
    const auto r2 =
        estimate(ex.problem, config_for(2, 1.0 / 32.0), 0.5, x0, 100000, 556, 0);
    const double e1 = std::abs(r1.mean - exact);
    const double e2 = std::abs(r2.mean - exact);
    detail += fmt("; removal err %.2e vs surrogate err %.2e", e1, e2);
    return ok && e2 < e1;
}

// --- criterion 6: high-dimension smoke ---------------------------------------

bool high_dimension(std::string& detail) {
    const auto ex = build_example1(100, 0.25);
    const std::vector<double> x0(100, 0.01);
    const auto rep =
        estimate(ex.problem, config_for(1, 1.0 / 5.0), 0.5, x0, 1000, 1212, 0);
    const double exact = ex.exact(0.5, x0);
    const double err = std::abs(rep.mean - exact);
    const double tol = std::max(3.0 * rep.std_error, 3.0 * 9.041e-2);
    detail = fmt("err %.3e (tol %.3e), %.1fs", err, tol, rep.elapsed_seconds);
    return err <= tol && rep.elapsed_seconds < 120.0;
}

// --- criterion 8: cost grows as eps shrinks ----------------------------------

bool cost_monotonicity(std::string& detail) {
    const auto ex = build_example1(2, 0.75);
    const std::vector<double> x0{0.5, 0.5};
    std::vector<double> steps, secs;
    for (const double eps : {1.0 / 10.0, 1.0 / 20.0, 1.0 / 40.0}) {
        const auto rep =
            estimate_serial(ex.problem, config_for(1, eps), 0.5, x0, 10000, 77);
        steps.push_back(rep.avg_steps);
        secs.push_back(rep.elapsed_seconds);
    }
    const bool steps_up = steps[0] < steps[1] && steps[1] < steps[2];
    const bool time_up = secs[0] < secs[1] && secs[1] < secs[2];
    detail = fmt("avg steps %.1f/%.1f/%.1f, time %.2fs/%.2fs/%.2fs", steps[0],
                 steps[1], steps[2], secs[0], secs[1], secs[2]);
    return steps_up && time_up;
}

// --- criterion 9: steady-state sanity ----------------------------------------

bool steady_state(std::string& detail) {
    problems::SteadyProblemSpec p;
    p.n = 2;
    p.s = 0.5;
    p.domain = geometry::Domain::ball(std::vector<double>(2, 0.0), 1.0);
    p.drift = [](std::span<const double>, std::span<double> out) {
        for (auto& v : out) v = 0.0;
    };
    p.potential = [](std::span<const double>) { return 0.0; };
    p.source = [](std::span<const double>) { return 1.0; };
    p.exterior = [](std::span<const double>) { return 0.0; };

    const auto cfg = config_for(1, 1.0 / 40.0);
    const std::vector<double> centre{0.0, 0.0};
    const std::vector<double> edge{0.9, 0.0};
    const auto a = estimate_steady(p, cfg, centre, 10000, 4004, 0);
    const auto b = estimate_steady(p, cfg, edge, 10000, 4005, 0);
    const double sep = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    detail = fmt("E[tau] %.4f at centre vs %.4f near the rim (3 sigma = %.4f)",
                 a.mean, b.mean, 3.0 * sep);
    return a.mean > 0.0 && b.mean > 0.0 && a.mean - b.mean > 3.0 * sep;
}

}  // namespace

int main() {
    Gate gate;
    gate.run(1, "sampler laws", sampler_laws);
    gate.run(2, "zero-variance oracle", zero_variance);
    gate.run(3, "tabulated spot value", table_spot);
    gate.run(4, "scheme-1 order", scheme1_order);
    gate.run(5, "scheme-2 order", scheme2_order);
    gate.run(6, "high-dimension smoke", high_dimension);
    gate.run(7, "worker determinism", determinism);
    gate.run(8, "cost monotonicity", cost_monotonicity);
    gate.run(9, "steady-state sanity", steady_state);

    if (gate.failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", gate.failures);
    return 1;
}
