#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace stablemc::cli {

/// Effective configuration of a CLI invocation.  A flat JSON object with
/// the same keys can be supplied via --config; explicit flags override
/// config-file values, which override the built-in defaults shown here.
struct RunConfig {
    std::string example = "example1";  ///< example id or "custom"
    int scheme = 1;                    ///< 1 | 2
    int n = 2;
    double s = 0.5;
    int i = 1;                         ///< example-3 variant when example=example3
    std::vector<double> eps;           ///< one value for solve, a list for study
    std::vector<std::uint64_t> n_samples{10000};  ///< single or one per eps
    double t0 = 0.5;
    std::string x0 = "center-over-n";  ///< or an explicit comma-separated vector
    std::uint64_t seed = 0;
    int workers = 0;                   ///< 0 = runtime default / env override
    std::optional<double> dt_cap;
    std::uint64_t max_steps = 10'000'000;
    int scan_k = 64;
    std::string out;                   ///< study output path
    std::string format = "csv";        ///< csv | json
    bool strict_paper_f3 = false;      ///< fixed-exponent example-3 forcing
    bool json_report = false;          ///< solve: machine-readable report
    bool crn = false;                  ///< study: common random numbers
    // custom problem (constant coefficients on a centred ball)
    bool steady = false;
    double horizon = 1.0;
    double ball_radius = 1.0;
    double b_const = 0.0;
    double c_const = 0.0;
    double f_const = 0.0;
    double g_const = 0.0;
    double chi_const = 0.0;
};

bool operator==(const RunConfig&, const RunConfig&);

/// Parse "p/q" fraction literals (binary-nearest double of the quotient) or
/// plain decimal literals.
double parse_fraction(const std::string& text);

/// Comma-separated list of fraction/decimal literals.
std::vector<double> parse_number_list(const std::string& text);

std::string dump_config(const RunConfig& config);
RunConfig load_config(const std::string& json_text);

/// Entry point behind main().  Returns 0 on success, 1 on validation
/// errors, 2 on runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace stablemc::cli
