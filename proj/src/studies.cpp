#include "stablemc/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stablemc/rng.hpp"

namespace stablemc::studies {

namespace {

using nlohmann::json;

// 17 significant digits round-trip any double exactly.
std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_x0(const std::vector<double>& x0) {
    std::string out;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        if (i) out += ',';
        out += num17(x0[i]);
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

double to_double(const std::string& text) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size())
        throw std::runtime_error("study table: malformed number '" + text + "'");
    return v;
}

constexpr const char* kHeader = "eps,abs_error,stderr,avg_steps,elapsed_seconds";

}  // namespace

bool operator==(const StudyMeta& a, const StudyMeta& b) {
    return a.example == b.example && a.n == b.n && a.s == b.s &&
           a.scheme == b.scheme && a.n_samples == b.n_samples &&
           a.seed == b.seed && a.t0 == b.t0 && a.x0 == b.x0;
}

bool operator==(const StudyRow& a, const StudyRow& b) {
    return a.eps == b.eps && a.abs_error == b.abs_error &&
           a.std_error == b.std_error && a.avg_steps == b.avg_steps &&
           a.elapsed_seconds == b.elapsed_seconds;
}

bool operator==(const StudyTable& a, const StudyTable& b) {
    return a.meta == b.meta && a.rows == b.rows &&
           a.fitted_order == b.fitted_order && a.theory_order == b.theory_order;
}

double theory_order(schemes::Scheme scheme, double beta, double s) {
    const double jump_bias = 2.0 * s;
    const double small_jump_bias = scheme == schemes::Scheme::remove_small_jumps
                                       ? beta - 2.0 * s
                                       : std::floor(beta) - 2.0 * s;
    return std::min(jump_bias, small_jump_bias);
}

double fit_order(std::span<const std::pair<double, double>> eps_and_error) {
    if (eps_and_error.size() < 2)
        throw std::invalid_argument("fit_order: need at least two rows");
    double mx = 0.0, my = 0.0;
    for (const auto& [eps, err] : eps_and_error) {
        if (!(eps > 0.0)) throw std::invalid_argument("fit_order: eps must be > 0");
        if (!(err > 0.0)) throw std::invalid_argument("fit_order: errors must be > 0");
        mx += std::log(eps);
        my += std::log(err);
    }
    const double inv_n = 1.0 / static_cast<double>(eps_and_error.size());
    mx *= inv_n;
    my *= inv_n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [eps, err] : eps_and_error) {
        const double dx = std::log(eps) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(err) - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_order: eps values are all equal");
    return sxy / sxx;
}

StudyTable run_study(const problems::ExampleCase& example,
                     schemes::SchemeConfig cfg_base,
                     const std::vector<double>& eps_list, double t0,
                     std::span<const double> x0, std::size_t n_samples,
                     std::uint64_t seed, const StudyOptions& options) {
    if (eps_list.empty())
        throw std::invalid_argument("run_study: eps list must be non-empty");
    for (const double e : eps_list)
        if (!(e > 0.0 && e < 1.0))
            throw std::invalid_argument("run_study: every eps must lie in (0,1)");
    if (!options.n_overrides.empty() &&
        options.n_overrides.size() != eps_list.size())
        throw std::invalid_argument(
            "run_study: per-eps sample overrides must match the eps list");
    if (!example.exact)
        throw std::invalid_argument("run_study: example has no exact solution");

    const double exact = example.exact(t0, x0);

    StudyTable table;
    table.meta = StudyMeta{example.id,
                           example.n,
                           example.s,
                           static_cast<int>(cfg_base.scheme),
                           n_samples,
                           seed,
                           t0,
                           {x0.begin(), x0.end()}};
    table.theory_order =
        theory_order(cfg_base.scheme, example.smoothness_beta, example.s);

    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        schemes::SchemeConfig cfg = cfg_base;
        cfg.eps = eps_list[k];
        const std::size_t n_k =
            options.n_overrides.empty() ? n_samples : options.n_overrides[k];
        const std::uint64_t seed_k =
            options.common_random_numbers ? seed : mix_seed(seed, k);
        const auto rep = montecarlo::estimate(example.problem, cfg, t0, x0, n_k,
                                              seed_k, options.workers);
        table.rows.push_back({cfg.eps, std::abs(rep.mean - exact), rep.std_error,
                              rep.avg_steps, rep.elapsed_seconds});
    }

    std::sort(table.rows.begin(), table.rows.end(),
              [](const StudyRow& a, const StudyRow& b) { return a.eps > b.eps; });

    const bool fittable =
        table.rows.size() >= 2 &&
        std::all_of(table.rows.begin(), table.rows.end(),
                    [](const StudyRow& r) { return r.abs_error > 0.0; });
    if (fittable) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : table.rows) pts.emplace_back(r.eps, r.abs_error);
        table.fitted_order = fit_order(pts);
    }
    return table;
}

std::string to_csv(const StudyTable& t) {
    std::ostringstream out;
    out << "# example=" << t.meta.example << '\n';
    out << "# n=" << t.meta.n << '\n';
    out << "# s=" << num17(t.meta.s) << '\n';
    out << "# scheme=" << t.meta.scheme << '\n';
    out << "# n_samples=" << t.meta.n_samples << '\n';
    out << "# seed=" << t.meta.seed << '\n';
    out << "# t0=" << num17(t.meta.t0) << '\n';
    out << "# x0=" << join_x0(t.meta.x0) << '\n';
    out << "# theory_order=" << num17(t.theory_order) << '\n';
    out << "# fitted_order="
        << (t.fitted_order ? num17(*t.fitted_order) : std::string("unavailable"))
        << '\n';
    out << kHeader << '\n';
    for (const auto& r : t.rows) {
        out << num17(r.eps) << ',' << num17(r.abs_error) << ','
            << num17(r.std_error) << ',' << num17(r.avg_steps) << ','
            << num17(r.elapsed_seconds) << '\n';
    }
    return out.str();
}

StudyTable from_csv(const std::string& text) {
    StudyTable t;
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("study csv: malformed meta line '" + line + "'");
            const std::string key = line.substr(2, eq - 2);
            const std::string val = line.substr(eq + 1);
            if (key == "example") t.meta.example = val;
            else if (key == "n") t.meta.n = std::stoi(val);
            else if (key == "s") t.meta.s = to_double(val);
            else if (key == "scheme") t.meta.scheme = std::stoi(val);
            else if (key == "n_samples") t.meta.n_samples = std::stoull(val);
            else if (key == "seed") t.meta.seed = std::stoull(val);
            else if (key == "t0") t.meta.t0 = to_double(val);
            else if (key == "x0") {
                t.meta.x0.clear();
                if (!val.empty())
                    for (const auto& part : split(val, ',')) t.meta.x0.push_back(to_double(part));
            } else if (key == "theory_order") t.theory_order = to_double(val);
            else if (key == "fitted_order") {
                if (val != "unavailable") t.fitted_order = to_double(val);
            } else {
                throw std::runtime_error("study csv: unknown meta key '" + key + "'");
            }
            continue;
        }
        if (!saw_header) {
            if (line != kHeader)
                throw std::runtime_error("study csv: unexpected header '" + line + "'");
            saw_header = true;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 5)
            throw std::runtime_error("study csv: expected 5 columns, got '" + line + "'");
        t.rows.push_back({to_double(cols[0]), to_double(cols[1]), to_double(cols[2]),
                          to_double(cols[3]), to_double(cols[4])});
    }
    if (!saw_header) throw std::runtime_error("study csv: missing column header");
    return t;
}

std::string to_json_string(const StudyTable& t) {
    json j;
    j["meta"] = {{"example", t.meta.example}, {"n", t.meta.n},
                 {"s", t.meta.s},             {"scheme", t.meta.scheme},
                 {"n_samples", t.meta.n_samples}, {"seed", t.meta.seed},
                 {"t0", t.meta.t0},           {"x0", t.meta.x0}};
    j["rows"] = json::array();
    for (const auto& r : t.rows)
        j["rows"].push_back({{"eps", r.eps},
                             {"abs_error", r.abs_error},
                             {"stderr", r.std_error},
                             {"avg_steps", r.avg_steps},
                             {"elapsed_seconds", r.elapsed_seconds}});
    if (t.fitted_order)
        j["fitted_order"] = *t.fitted_order;
    else
        j["fitted_order"] = nullptr;
    j["theory_order"] = t.theory_order;
    return j.dump(2) + "\n";
}

StudyTable from_json_string(const std::string& text) {
    const json j = json::parse(text);
    StudyTable t;
    const auto& m = j.at("meta");
    t.meta.example = m.at("example").get<std::string>();
    t.meta.n = m.at("n").get<int>();
    t.meta.s = m.at("s").get<double>();
    t.meta.scheme = m.at("scheme").get<int>();
    t.meta.n_samples = m.at("n_samples").get<std::size_t>();
    t.meta.seed = m.at("seed").get<std::uint64_t>();
    t.meta.t0 = m.at("t0").get<double>();
    t.meta.x0 = m.at("x0").get<std::vector<double>>();
    for (const auto& r : j.at("rows"))
        t.rows.push_back({r.at("eps").get<double>(), r.at("abs_error").get<double>(),
                          r.at("stderr").get<double>(),
                          r.at("avg_steps").get<double>(),
                          r.at("elapsed_seconds").get<double>()});
    if (!j.at("fitted_order").is_null())
        t.fitted_order = j.at("fitted_order").get<double>();
    t.theory_order = j.at("theory_order").get<double>();
    return t;
}

void emit(const StudyTable& table, Format format,
          const std::filesystem::path& destination) {
    std::ofstream out(destination);
    if (!out)
        throw std::runtime_error("emit: cannot open '" + destination.string() + "'");
    out << (format == Format::csv ? to_csv(table) : to_json_string(table));
    if (!out)
        throw std::runtime_error("emit: write to '" + destination.string() + "' failed");
}

StudyTable parse_file(Format format, const std::filesystem::path& source) {
    std::ifstream in(source);
    if (!in)
        throw std::runtime_error("parse_file: cannot open '" + source.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return format == Format::csv ? from_csv(buf.str())
                                 : from_json_string(buf.str());
}

}  // namespace stablemc::studies
