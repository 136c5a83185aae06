#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stablemc/montecarlo.hpp"
#include "stablemc/problems.hpp"

namespace stablemc::studies {

struct StudyMeta {
    std::string example;
    int n = 0;
    double s = 0.0;
    int scheme = 1;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double t0 = 0.0;
    std::vector<double> x0;
};

struct StudyRow {
    double eps = 0.0;
    double abs_error = 0.0;
    double std_error = 0.0;
    double avg_steps = 0.0;
    double elapsed_seconds = 0.0;
};

/// Convergence study over the truncation level: one estimate per eps, rows
/// sorted by decreasing eps, plus the fitted and theoretical orders.
/// fitted_order is absent when fewer than two rows exist or some row has
/// zero error (the log-log fit would be undefined).
struct StudyTable {
    StudyMeta meta;
    std::vector<StudyRow> rows;
    std::optional<double> fitted_order;
    double theory_order = 0.0;
};

bool operator==(const StudyMeta&, const StudyMeta&);
bool operator==(const StudyRow&, const StudyRow&);
bool operator==(const StudyTable&, const StudyTable&);

struct StudyOptions {
    /// Per-eps sample-count overrides; empty means n_samples everywhere,
    /// otherwise must match eps_list in length.
    std::vector<std::size_t> n_overrides;
    /// Reuse the same seed for every eps (variance-reduced slopes); off by
    /// default, matching independent per-eps seeding.
    bool common_random_numbers = false;
    int workers = 0;
};

/// Run the study on an example with a known solution.  Row k uses the
/// sub-seed mix_seed(seed, k) unless common_random_numbers is set.
StudyTable run_study(const problems::ExampleCase& example,
                     schemes::SchemeConfig cfg_base,
                     const std::vector<double>& eps_list, double t0,
                     std::span<const double> x0, std::size_t n_samples,
                     std::uint64_t seed, const StudyOptions& options = {});

/// Ordinary least-squares slope of log(abs_error) against log(eps).
/// Requires at least two points, all errors positive and the eps values not
/// all equal.
double fit_order(std::span<const std::pair<double, double>> eps_and_error);

/// Expected weak order for a solution of spatial smoothness beta:
/// min(2s, beta - 2s) for scheme 1 and min(2s, floor(beta) - 2s) for
/// scheme 2.
double theory_order(schemes::Scheme scheme, double beta, double s);

enum class Format { csv, json };

/// Serialise a table.  CSV carries the meta (and orders) as '#'-prefixed
/// header lines followed by the exact column header
/// eps,abs_error,stderr,avg_steps,elapsed_seconds; JSON mirrors the
/// StudyTable field names.  Both round-trip losslessly (17 significant
/// digits / shortest-round-trip doubles).
std::string to_csv(const StudyTable& table);
std::string to_json_string(const StudyTable& table);
StudyTable from_csv(const std::string& text);
StudyTable from_json_string(const std::string& text);

/// Write the table to `destination` in the requested format.
/// Throws std::runtime_error on I/O failure.
void emit(const StudyTable& table, Format format,
          const std::filesystem::path& destination);

/// Parse a file previously written by emit (self-check mode).
StudyTable parse_file(Format format, const std::filesystem::path& source);

}  // namespace stablemc::studies
