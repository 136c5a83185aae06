#include "stablemc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "stablemc/montecarlo.hpp"
#include "stablemc/problems.hpp"
#include "stablemc/selftest.hpp"
#include "stablemc/studies.hpp"

namespace stablemc::cli {

namespace {

using nlohmann::json;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> make_x0(const std::string& spec, int n) {
    if (spec == "center-over-n")
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    const auto parts = parse_number_list(spec);
    if (static_cast<int>(parts.size()) != n)
        throw ValidationError("x0 has " + std::to_string(parts.size()) +
                              " components but n = " + std::to_string(n));
    return parts;
}

std::string normalised_example_id(const RunConfig& cfg) {
    if (cfg.example == "example3") {
        if (cfg.i != 1 && cfg.i != 2)
            throw ValidationError("example3 variant i must be 1 or 2");
        return "example3i" + std::to_string(cfg.i);
    }
    return cfg.example;
}

void validate_common(const RunConfig& cfg) {
    if (cfg.scheme != 1 && cfg.scheme != 2)
        throw ValidationError("scheme must be 1 or 2");
    if (cfg.n < 1) throw ValidationError("n must be >= 1");
    if (!(cfg.s > 0.0 && cfg.s < 1.0)) throw ValidationError("s must lie in (0,1)");
    if (cfg.eps.empty()) throw ValidationError("at least one eps value is required");
    for (const double e : cfg.eps)
        if (!(e > 0.0 && e < 1.0)) throw ValidationError("every eps must lie in (0,1)");
    if (cfg.n_samples.empty()) throw ValidationError("N must be provided");
    for (const auto n : cfg.n_samples)
        if (n < 1) throw ValidationError("every N must be >= 1");
    if (cfg.dt_cap) {
        if (!(*cfg.dt_cap > 0.0)) throw ValidationError("dt-cap must be > 0");
        if (cfg.scheme != 2)
            throw ValidationError("dt-cap applies to scheme 2 only");
    }
    if (cfg.workers < 0) throw ValidationError("workers must be >= 0");
    if (cfg.scan_k < 2) throw ValidationError("scan-k must be >= 2");
    if (cfg.max_steps < 1) throw ValidationError("max-steps must be >= 1");
    if (cfg.format != "csv" && cfg.format != "json")
        throw ValidationError("format must be csv or json");
}

int resolved_workers(const RunConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    if (const char* env = std::getenv("STABLEMC_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 0;  // runtime default
}

schemes::SchemeConfig make_scheme_config(const RunConfig& cfg, double eps) {
    schemes::SchemeConfig sc;
    sc.scheme = cfg.scheme == 1 ? schemes::Scheme::remove_small_jumps
                                : schemes::Scheme::replace_small_jumps;
    sc.eps = eps;
    sc.dt_cap = cfg.dt_cap;
    sc.max_steps = cfg.max_steps;
    sc.scan_k = cfg.scan_k;
    return sc;
}

problems::ProblemSpec make_custom_problem(const RunConfig& cfg) {
    problems::ProblemSpec p;
    p.n = cfg.n;
    p.s = cfg.s;
    p.horizon = cfg.horizon;
    p.domain = geometry::Domain::ball(std::vector<double>(cfg.n, 0.0),
                                      cfg.ball_radius);
    const double b = cfg.b_const;
    p.drift = [b](double, std::span<const double>, std::span<double> out) {
        for (auto& v : out) v = b;
    };
    p.potential = [c = cfg.c_const](double, std::span<const double>) { return c; };
    p.source = [f = cfg.f_const](double, std::span<const double>) { return f; };
    p.terminal = [g = cfg.g_const](std::span<const double>) { return g; };
    p.exterior = [chi = cfg.chi_const](double, std::span<const double>) { return chi; };
    return p;
}

problems::SteadyProblemSpec make_custom_steady(const RunConfig& cfg) {
    problems::SteadyProblemSpec p;
    p.n = cfg.n;
    p.s = cfg.s;
    p.domain = geometry::Domain::ball(std::vector<double>(cfg.n, 0.0),
                                      cfg.ball_radius);
    const double b = cfg.b_const;
    p.drift = [b](std::span<const double>, std::span<double> out) {
        for (auto& v : out) v = b;
    };
    p.potential = [c = cfg.c_const](std::span<const double>) { return c; };
    p.source = [f = cfg.f_const](std::span<const double>) { return f; };
    p.exterior = [g = cfg.g_const](std::span<const double>) { return g; };
    return p;
}

void print_report(std::ostream& out, const RunConfig& cfg,
                  const montecarlo::EstimatorReport& rep,
                  const std::optional<double>& exact) {
    if (cfg.json_report) {
        json j = {{"mean", rep.mean},
                  {"stderr", rep.std_error},
                  {"n_samples", rep.n_samples},
                  {"avg_steps", rep.avg_steps},
                  {"elapsed_seconds", rep.elapsed_seconds},
                  {"seed", rep.seed}};
        if (exact) {
            j["exact"] = *exact;
            j["abs_error"] = std::abs(rep.mean - *exact);
        }
        out << j.dump(2) << '\n';
        return;
    }
    auto line = [&out](const char* key, const std::string& value) {
        out << key << std::string(18 - std::string(key).size(), ' ') << value << '\n';
    };
    char buf[40];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    line("mean", num(rep.mean));
    line("stderr", num(rep.std_error));
    line("n_samples", std::to_string(rep.n_samples));
    line("avg_steps", num(rep.avg_steps));
    line("elapsed_seconds", num(rep.elapsed_seconds));
    line("seed", std::to_string(rep.seed));
    if (exact) {
        line("exact", num(*exact));
        line("abs_error", num(std::abs(rep.mean - *exact)));
    }
}

int do_solve(const RunConfig& cfg, std::ostream& out) {
    validate_common(cfg);
    if (cfg.eps.size() != 1)
        throw ValidationError("solve takes exactly one eps value");
    if (cfg.n_samples.size() != 1)
        throw ValidationError("solve takes exactly one N value");
    const double eps = cfg.eps[0];
    const std::size_t n_samples = cfg.n_samples[0];
    const auto sc = make_scheme_config(cfg, eps);
    const int workers = resolved_workers(cfg);
    const auto x0 = make_x0(cfg.x0, cfg.n);

    if (cfg.example == "custom") {
        montecarlo::EstimatorReport rep;
        if (cfg.steady) {
            rep = montecarlo::estimate_steady(make_custom_steady(cfg), sc, x0,
                                              n_samples, cfg.seed, workers);
        } else {
            const auto p = make_custom_problem(cfg);
            if (!(cfg.t0 >= 0.0 && cfg.t0 < p.horizon))
                throw ValidationError("t0 must lie in [0, T)");
            rep = montecarlo::estimate(p, sc, cfg.t0, x0, n_samples, cfg.seed,
                                       workers);
        }
        print_report(out, cfg, rep, std::nullopt);
        return 0;
    }

    if (cfg.steady)
        throw ValidationError("--steady is only available with --example custom");
    const auto ex = problems::build_example(normalised_example_id(cfg), cfg.n,
                                            cfg.s, cfg.strict_paper_f3);
    if (!(cfg.t0 >= 0.0 && cfg.t0 < ex.problem.horizon))
        throw ValidationError("t0 must lie in [0, T)");
    const auto rep = montecarlo::estimate(ex.problem, sc, cfg.t0, x0, n_samples,
                                          cfg.seed, workers);
    print_report(out, cfg, rep, ex.exact(cfg.t0, x0));
    return 0;
}

int do_study(const RunConfig& cfg, std::ostream& out) {
    validate_common(cfg);
    if (cfg.example == "custom")
        throw ValidationError("study needs an example with an exact solution");
    if (cfg.out.empty())
        throw ValidationError("study requires --out <path>");
    if (cfg.n_samples.size() != 1 && cfg.n_samples.size() != cfg.eps.size())
        throw ValidationError("N must be a single value or one per eps");

    const auto ex = problems::build_example(normalised_example_id(cfg), cfg.n,
                                            cfg.s, cfg.strict_paper_f3);
    if (!(cfg.t0 >= 0.0 && cfg.t0 < ex.problem.horizon))
        throw ValidationError("t0 must lie in [0, T)");
    const auto x0 = make_x0(cfg.x0, cfg.n);

    studies::StudyOptions opts;
    opts.workers = resolved_workers(cfg);
    opts.common_random_numbers = cfg.crn;
    if (cfg.n_samples.size() == cfg.eps.size() && cfg.eps.size() > 1)
        opts.n_overrides.assign(cfg.n_samples.begin(), cfg.n_samples.end());

    const auto table =
        studies::run_study(ex, make_scheme_config(cfg, cfg.eps[0]), cfg.eps,
                           cfg.t0, x0, cfg.n_samples[0], cfg.seed, opts);
    const auto format =
        cfg.format == "csv" ? studies::Format::csv : studies::Format::json;
    studies::emit(table, format, cfg.out);

    out << "wrote " << cfg.out << " (" << cfg.format << ", " << table.rows.size()
        << " rows)\n";
    if (table.fitted_order)
        out << "fitted order " << *table.fitted_order << " vs theory "
            << table.theory_order << '\n';
    else
        out << "fitted order unavailable (need >= 2 rows with positive error); "
            << "theory " << table.theory_order << '\n';
    return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& eps_text,
                        std::string& n_text, std::string& config_path,
                        bool& dump) {
    cmd->add_option("--config", config_path,
                    "flat JSON config file; flags given here override it");
    cmd->add_flag("--dump-config", dump,
                  "print the effective configuration as JSON and exit");
    cmd->add_option("--example", cfg.example,
                    "example1 | example2 | example3 | example3i1 | example3i2 | custom");
    cmd->add_option("--i", cfg.i, "variant i for --example example3 (1 or 2)");
    cmd->add_option("--scheme", cfg.scheme, "path scheme: 1 or 2");
    cmd->add_option("--n", cfg.n, "space dimension");
    cmd->add_option("--s", cfg.s, "stability half-index in (0,1)");
    cmd->add_option("--eps", eps_text,
                    "truncation level(s); fractions allowed, e.g. 1/10,1/20,1/40");
    cmd->add_option("--N", n_text, "sample count, or one count per eps");
    cmd->add_option("--t0", cfg.t0, "evaluation time");
    cmd->add_option("--x0", cfg.x0,
                    "evaluation point: 'center-over-n' or comma-separated vector");
    cmd->add_option("--seed", cfg.seed, "base seed");
    cmd->add_option("--workers", cfg.workers,
                    "worker threads (0 = runtime default / STABLEMC_WORKERS)");
    cmd->add_option("--dt-cap", cfg.dt_cap, "step-size cap for scheme 2");
    cmd->add_option("--max-steps", cfg.max_steps, "per-path step budget");
    cmd->add_option("--scan-k", cfg.scan_k, "exit-scan subintervals");
    cmd->add_flag("--strict-paper-f3", cfg.strict_paper_f3,
                  "example 3: use the fixed exponent 2+s in the first forcing "
                  "term instead of deriving it from i");
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.example == b.example && a.scheme == b.scheme && a.n == b.n &&
           a.s == b.s && a.i == b.i && a.eps == b.eps &&
           a.n_samples == b.n_samples && a.t0 == b.t0 && a.x0 == b.x0 &&
           a.seed == b.seed && a.workers == b.workers && a.dt_cap == b.dt_cap &&
           a.max_steps == b.max_steps && a.scan_k == b.scan_k && a.out == b.out &&
           a.format == b.format && a.strict_paper_f3 == b.strict_paper_f3 &&
           a.json_report == b.json_report && a.crn == b.crn &&
           a.steady == b.steady && a.horizon == b.horizon &&
           a.ball_radius == b.ball_radius && a.b_const == b.b_const &&
           a.c_const == b.c_const && a.f_const == b.f_const &&
           a.g_const == b.g_const && a.chi_const == b.chi_const;
}

double parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument("malformed number '" + text + "'");
        return v;
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    const double p = std::stod(num, &used);
    if (used != num.size())
        throw std::invalid_argument("malformed fraction '" + text + "'");
    const double q = std::stod(den, &used);
    if (used != den.size() || q == 0.0)
        throw std::invalid_argument("malformed fraction '" + text + "'");
    return p / q;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) values.push_back(parse_fraction(cur));
    if (values.empty()) throw std::invalid_argument("empty number list");
    return values;
}

std::string dump_config(const RunConfig& c) {
    json j = {{"example", c.example},
              {"scheme", c.scheme},
              {"n", c.n},
              {"s", c.s},
              {"i", c.i},
              {"eps", c.eps},
              {"n_samples", c.n_samples},
              {"t0", c.t0},
              {"x0", c.x0},
              {"seed", c.seed},
              {"workers", c.workers},
              {"dt_cap", c.dt_cap ? json(*c.dt_cap) : json(nullptr)},
              {"max_steps", c.max_steps},
              {"scan_k", c.scan_k},
              {"out", c.out},
              {"format", c.format},
              {"strict_paper_f3", c.strict_paper_f3},
              {"json_report", c.json_report},
              {"crn", c.crn},
              {"steady", c.steady},
              {"horizon", c.horizon},
              {"ball_radius", c.ball_radius},
              {"b_const", c.b_const},
              {"c_const", c.c_const},
              {"f_const", c.f_const},
              {"g_const", c.g_const},
              {"chi_const", c.chi_const}};
    return j.dump(2) + "\n";
}

RunConfig load_config(const std::string& json_text) {
    const json j = json::parse(json_text);
    RunConfig c;
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("example", c.example);
    get("scheme", c.scheme);
    get("n", c.n);
    get("s", c.s);
    get("i", c.i);
    get("eps", c.eps);
    get("n_samples", c.n_samples);
    get("t0", c.t0);
    get("x0", c.x0);
    get("seed", c.seed);
    get("workers", c.workers);
    if (j.contains("dt_cap") && !j.at("dt_cap").is_null())
        c.dt_cap = j.at("dt_cap").get<double>();
    get("max_steps", c.max_steps);
    get("scan_k", c.scan_k);
    get("out", c.out);
    get("format", c.format);
    get("strict_paper_f3", c.strict_paper_f3);
    get("json_report", c.json_report);
    get("crn", c.crn);
    get("steady", c.steady);
    get("horizon", c.horizon);
    get("ball_radius", c.ball_radius);
    get("b_const", c.b_const);
    get("c_const", c.c_const);
    get("f_const", c.f_const);
    get("g_const", c.g_const);
    get("chi_const", c.chi_const);
    return c;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    RunConfig cfg;

    // Locate --config first so flags parsed afterwards override its values.
    std::string config_path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) config_path = args[k + 1];
        else if (args[k].rfind("--config=", 0) == 0) config_path = args[k].substr(9);
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            err << "error: cannot open config file '" << config_path << "'\n";
            return 1;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            cfg = load_config(buf.str());
        } catch (const std::exception& e) {
            err << "error: bad config file: " << e.what() << '\n';
            return 1;
        }
    }

    CLI::App app{"Monte Carlo solver for Dirichlet problems of parabolic "
                 "equations with the fractional Laplacian"};
    app.require_subcommand(1);

    std::string eps_text, n_text, config_opt;
    bool dump = false;

    auto* solve = app.add_subcommand("solve", "estimate u(t0, x0) for one eps");
    add_common_options(solve, cfg, eps_text, n_text, config_opt, dump);
    solve->add_flag("--json", cfg.json_report, "print the report as JSON");
    solve->add_flag("--steady", cfg.steady,
                    "custom problem: steady-state (no horizon)");
    solve->add_option("--horizon", cfg.horizon, "custom problem: T");
    solve->add_option("--ball-radius", cfg.ball_radius, "custom problem: domain radius");
    solve->add_option("--b-const", cfg.b_const, "custom problem: constant drift");
    solve->add_option("--c-const", cfg.c_const, "custom problem: constant potential");
    solve->add_option("--f-const", cfg.f_const, "custom problem: constant source");
    solve->add_option("--g-const", cfg.g_const, "custom problem: terminal datum");
    solve->add_option("--chi-const", cfg.chi_const, "custom problem: exterior datum");

    auto* study = app.add_subcommand("study", "convergence study over an eps list");
    add_common_options(study, cfg, eps_text, n_text, config_opt, dump);
    study->add_option("--out", cfg.out, "output file path");
    study->add_option("--format", cfg.format, "csv | json");
    study->add_flag("--crn", cfg.crn, "reuse one seed across eps values");

    auto* selftest_cmd =
        app.add_subcommand("selftest", "run the built-in property checks");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!eps_text.empty()) cfg.eps = parse_number_list(eps_text);
        if (!n_text.empty()) {
            cfg.n_samples.clear();
            for (const double v : parse_number_list(n_text)) {
                if (!(v >= 1.0))
                    throw ValidationError("every N must be >= 1");
                cfg.n_samples.push_back(static_cast<std::uint64_t>(v));
            }
        }
        if (dump) {
            out << dump_config(cfg);
            return 0;
        }

        if (app.got_subcommand(selftest_cmd))
            return selftest::run(out) ? 0 : 2;
        if (app.got_subcommand(solve)) return do_solve(cfg, out);
        return do_study(cfg, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace stablemc::cli
