#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "stablemc/problems.hpp"
#include "stablemc/studies.hpp"

using namespace stablemc;
using namespace stablemc::studies;
using schemes::Scheme;

namespace {

StudyTable sample_table() {
    StudyTable t;
    t.meta = {"example1", 2, 0.5, 1, 10000, 42, 0.5, {0.5, 0.5}};
    t.rows = {{0.1, 3.5e-2, 1.2e-3, 1.71, 0.39},
              {0.05, 2.9e-2, 1.1e-3, 2.20, 0.20},
              {0.025, 2.1e-2, 1.05e-3, 2.90, 0.25}};
    t.fitted_order = 0.37;
    t.theory_order = 0.5;
    return t;
}

bool rows_equal_ignoring_time(const StudyTable& a, const StudyTable& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        const auto& x = a.rows[k];
        const auto& y = b.rows[k];
        if (x.eps != y.eps || x.abs_error != y.abs_error ||
            x.std_error != y.std_error || x.avg_steps != y.avg_steps)
            return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("studies") {

TEST_CASE("order fit: pinned slopes") {
    using P = std::pair<double, double>;
    const std::vector<P> unit{{0.1, 0.1}, {0.01, 0.01}};
    CHECK(fit_order(unit) == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<P> quad{{0.1, 0.01}, {0.01, 0.0001}};
    CHECK(fit_order(quad) == doctest::Approx(2.0).epsilon(1e-12));
    std::vector<P> half;
    for (const double e : {0.5, 0.25, 0.125, 0.0625, 0.03125})
        half.emplace_back(e, std::sqrt(e));
    CHECK(fit_order(half) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("order fit matches an independent least-squares route") {
    // the five published error magnitudes for the first example at s = 0.25
    const std::vector<double> eps{1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80, 1.0 / 160};
    const std::vector<double> err{3.525e-2, 2.914e-2, 2.151e-2, 1.560e-2, 1.131e-2};
    std::vector<std::pair<double, double>> pts;
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        pts.emplace_back(eps[k], err[k]);
        lx.push_back(std::log(eps[k]));
        ly.push_back(std::log(err[k]));
    }
    const double slope = fit_order(pts);
    CHECK(slope == doctest::Approx(oracles::ols_slope(lx, ly)).epsilon(1e-12));
    CHECK(slope == doctest::Approx(0.418).epsilon(0.01));
    CHECK(std::abs(slope - 0.5) < 0.12);  // statistical-noise distance to theory
}

TEST_CASE("order fit rejects degenerate inputs") {
    using P = std::pair<double, double>;
    CHECK_THROWS_AS(fit_order(std::vector<P>{{0.1, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_order(std::vector<P>{{0.1, 0.1}, {0.1, 0.2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_order(std::vector<P>{{0.1, 0.0}, {0.2, 0.1}}),
                    std::invalid_argument);
}

TEST_CASE("theoretical orders") {
    // scheme 1 on the rough family (beta = 1 + s)
    CHECK(theory_order(Scheme::remove_small_jumps, 1.25, 0.25) == 0.5);
    CHECK(theory_order(Scheme::remove_small_jumps, 1.5, 0.5) == 0.5);
    CHECK(theory_order(Scheme::remove_small_jumps, 1.75, 0.75) ==
          doctest::Approx(0.25).epsilon(1e-12));
    // scheme 2 on the smoother family (beta = 2 + s)
    CHECK(theory_order(Scheme::replace_small_jumps, 2.25, 0.25) == 0.5);
    CHECK(theory_order(Scheme::replace_small_jumps, 2.5, 0.5) == 1.0);
    CHECK(theory_order(Scheme::replace_small_jumps, 2.75, 0.75) == 0.5);
}

TEST_CASE("run_study: deterministic, sorted, fit attached") {
    const auto ex = problems::build_example1(2, 0.5);
    schemes::SchemeConfig cfg;
    const std::vector<double> x0{0.5, 0.5};
    const std::vector<double> eps{0.125, 0.5, 0.25};  // deliberately unsorted
    const auto a = run_study(ex, cfg, eps, 0.5, x0, 400, 99);
    const auto b = run_study(ex, cfg, eps, 0.5, x0, 400, 99);
    CHECK(rows_equal_ignoring_time(a, b));
    REQUIRE(a.rows.size() == 3);
    CHECK(a.rows[0].eps == 0.5);
    CHECK(a.rows[1].eps == 0.25);
    CHECK(a.rows[2].eps == 0.125);
    CHECK(a.meta.example == "example1");
    CHECK(a.theory_order == 0.5);
    if (a.fitted_order) CHECK(std::isfinite(*a.fitted_order));

    const auto single = run_study(ex, cfg, {0.25}, 0.5, x0, 200, 99);
    CHECK_FALSE(single.fitted_order.has_value());
}

TEST_CASE("run_study: per-eps overrides and validation") {
    const auto ex = problems::build_example1(2, 0.5);
    schemes::SchemeConfig cfg;
    const std::vector<double> x0{0.5, 0.5};
    StudyOptions opts;
    opts.n_overrides = {100, 200};
    const auto t = run_study(ex, cfg, {0.5, 0.25}, 0.5, x0, 100, 7, opts);
    CHECK(t.rows.size() == 2);
    opts.n_overrides = {100};
    CHECK_THROWS_AS(run_study(ex, cfg, {0.5, 0.25}, 0.5, x0, 100, 7, opts),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_study(ex, cfg, {}, 0.5, x0, 100, 7),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_study(ex, cfg, {1.5}, 0.5, x0, 100, 7),
                    std::invalid_argument);
}

TEST_CASE("csv round-trips exactly") {
    const auto t = sample_table();
    const auto text = to_csv(t);
    CHECK(text.find("eps,abs_error,stderr,avg_steps,elapsed_seconds") !=
          std::string::npos);
    const auto back = from_csv(text);
    CHECK(back == t);
}

TEST_CASE("json round-trips exactly") {
    auto t = sample_table();
    CHECK(from_json_string(to_json_string(t)) == t);
    t.fitted_order.reset();
    CHECK(from_json_string(to_json_string(t)) == t);
}

TEST_CASE("empty tables serialise as header-only files") {
    auto t = sample_table();
    t.rows.clear();
    t.fitted_order.reset();
    const auto text = to_csv(t);
    CHECK(text.find("\neps,abs_error,stderr,avg_steps,elapsed_seconds\n") !=
          std::string::npos);
    CHECK(text.back() == '\n');
    CHECK(from_csv(text) == t);
}

TEST_CASE("emit and parse files in both formats") {
    namespace fs = std::filesystem;
    const auto t = sample_table();
    const auto dir = fs::temp_directory_path();
    const auto csv_path = dir / "stablemc_test_table.csv";
    const auto json_path = dir / "stablemc_test_table.json";
    emit(t, Format::csv, csv_path);
    emit(t, Format::json, json_path);
    CHECK(parse_file(Format::csv, csv_path) == t);
    CHECK(parse_file(Format::json, json_path) == t);
    fs::remove(csv_path);
    fs::remove(json_path);
    CHECK_THROWS_AS(emit(t, Format::csv, dir / "no_such_dir" / "x.csv"),
                    std::runtime_error);
}

}  // TEST_SUITE
