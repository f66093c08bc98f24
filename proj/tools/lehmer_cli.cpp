// Command-line surface for the Lehmer/Mertens toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 domain error, 3 tolerance or
// verdict failure, 4 composite plus-case hit found.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lehmer/analysis.hpp"
#include "lehmer/arith.hpp"
#include "lehmer/mertens.hpp"
#include "lehmer/primes.hpp"
#include "lehmer/search.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerdict = 3;
constexpr int kExitPlusHit = 4;

// csv and json must carry bit-identical values, so both render scalars through
// the json serializer; table mode alone rounds to 8 significant digits.
std::string scalar_to_csv(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string scalar_to_table(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.8g", v.get<double>());
        return buf;
    }
    return v.dump();
}

void render_rows_csv(std::ostream& out, const json& rows) {
    if (rows.empty()) return;
    bool first = true;
    for (const auto& [key, value] : rows.front().items()) {
        (void)value;
        out << (first ? "" : ",") << key;
        first = false;
    }
    out << '\n';
    for (const auto& row : rows) {
        first = true;
        for (const auto& [key, value] : row.items()) {
            (void)key;
            out << (first ? "" : ",") << scalar_to_csv(value);
            first = false;
        }
        out << '\n';
    }
}

void render_rows_table(std::ostream& out, const json& rows) {
    if (rows.empty()) return;
    std::vector<std::string> headers;
    for (const auto& [key, value] : rows.front().items()) {
        (void)value;
        headers.push_back(key);
    }
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows) {
        std::vector<std::string> line;
        for (const auto& [key, value] : row.items()) {
            (void)key;
            line.push_back(scalar_to_table(value));
        }
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        widths[c] = headers[c].size();
        for (const auto& line : cells) widths[c] = std::max(widths[c], line[c].size());
    }
    auto pad = [&](const std::string& s, std::size_t w) {
        return s + std::string(w - s.size(), ' ');
    };
    for (std::size_t c = 0; c < headers.size(); ++c)
        out << pad(headers[c], widths[c]) << (c + 1 < headers.size() ? "  " : "");
    out << '\n';
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c)
            out << pad(line[c], widths[c]) << (c + 1 < line.size() ? "  " : "");
        out << '\n';
    }
}

// A result is an ordered object whose values are scalars, plus at most one
// array-of-objects field rendered as rows.
void render(const json& result, const std::string& format) {
    if (format == "json") {
        std::cout << result.dump(2) << '\n';
        return;
    }
    if (format == "csv") {
        bool wrote_scalars = false;
        json scalar_header = json::object();
        for (const auto& [key, value] : result.items())
            if (!value.is_array()) scalar_header[key] = value;
        if (!scalar_header.empty()) {
            render_rows_csv(std::cout, json::array({scalar_header}));
            wrote_scalars = true;
        }
        for (const auto& [key, value] : result.items())
            if (value.is_array() && !value.empty()) {
                if (wrote_scalars) std::cout << '\n';
                render_rows_csv(std::cout, value);
            }
        return;
    }
    // table
    for (const auto& [key, value] : result.items()) {
        if (value.is_array()) continue;
        std::cout << key << " = " << scalar_to_table(value) << '\n';
    }
    for (const auto& [key, value] : result.items())
        if (value.is_array() && !value.empty()) {
            std::cout << '\n' << key << ":\n";
            render_rows_table(std::cout, value);
        }
}

json hit_to_json(const lehmer::SearchHit& h) {
    json j = json::object();
    j["n"] = h.n;
    j["kind"] = lehmer::to_string(h.kind);
    j["m"] = h.m;
    j["phi"] = h.phi;
    j["omega"] = h.omega;
    j["factors"] = h.factors.to_string();
    return j;
}

struct CommonOpts {
    std::string format = "table";
};

void add_format_option(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
}

int run_check(lehmer::Natural n, lehmer::Natural k_min, const CommonOpts& opts) {
    lehmer::LehmerVerdict v = lehmer::lehmer_check(n);
    lehmer::FilterVerdict filter = lehmer::structural_filter(n, k_min);
    std::optional<lehmer::Natural> minus_m = lehmer::minus_check(n);

    json out = json::object();
    out["n"] = v.n;
    out["is_composite"] = v.is_composite;
    out["phi"] = v.phi;
    out["index_numerator"] = v.index_numerator;
    out["divides"] = v.divides;
    if (v.m)
        out["m"] = *v.m;
    else
        out["m"] = nullptr;
    if (minus_m)
        out["minus_m"] = *minus_m;
    else
        out["minus_m"] = nullptr;
    out["filter_eligible"] = filter.eligible;
    out["filter_reason"] = lehmer::to_string(filter.reason);
    out["filter_k_min"] = filter.k_min;
    render(out, opts.format);

    return (v.divides && v.is_composite) ? kExitPlusHit : kExitOk;
}

int run_analyze(lehmer::Natural n, double c, bool c_given, lehmer::Natural j,
                const std::string& mode, const std::string& product,
                const CommonOpts& opts) {
    json out = json::object();
    if (mode == "bounded") {
        if (!c_given) {
            lehmer::Natural p_k = lehmer::factorize(n).largest_prime();
            c = p_k >= lehmer::constants.x_threshold_large ? lehmer::constants.c_large
                                                           : lehmer::constants.c_small;
        }
        lehmer::LehmerAnalysis a = lehmer::analyze_bounded(n, c, j);
        out["n"] = a.n;
        out["factors"] = a.factors.to_string();
        out["p_k"] = a.p_k;
        out["r"] = a.r.to_double();
        out["r_exact"] = a.r.to_string();
        out["A"] = a.A;
        out["c_used"] = a.c_used;
        out["l_k"] = a.l_k;
        out["m_plus"] = a.m_plus;
        out["psi"] = a.psi;
        out["psi_exact"] = a.psi_exact.to_string();
        out["j"] = a.j;
        out["left_plus"] = a.left_plus;
        out["left_plus_exact"] = a.left_plus_exact.to_string();
        out["left_minus"] = a.left_minus;
        out["left_minus_exact"] = a.left_minus_exact.to_string();
        out["rhs"] = a.rhs.to_double();
        out["rhs_exact"] = a.rhs.to_string();
        out["plus_feasible"] = a.plus_feasible;
        out["minus_feasible"] = a.minus_feasible;
    } else {
        lehmer::ProductMode pm = product == "full" ? lehmer::ProductMode::full_product
                                                   : lehmer::ProductMode::partial_product;
        lehmer::AsymptoticAnalysis a = lehmer::analyze_asymptotic(n, pm, j);
        out["n"] = a.n;
        out["p_k"] = a.p_k;
        out["mode"] = product == "full" ? "full_product" : "partial_product";
        out["A"] = a.A;
        out["m_plus"] = a.m_plus;
        out["alpha_or_beta"] = a.alpha_or_beta;
        out["j"] = a.j;
        out["left_plus"] = a.left_plus;
        out["left_minus"] = a.left_minus;
        out["rhs"] = a.rhs.to_double();
        out["rhs_exact"] = a.rhs.to_string();
    }
    render(out, opts.format);
    return kExitOk;
}

int run_mertens(const std::string& what, double x, double c, bool include_two,
                const CommonOpts& opts) {
    json out = json::object();
    auto put_eval = [&](const lehmer::MertensEvaluation& e) {
        out["x"] = e.x;
        out["raw_value"] = e.raw_value;
        out["model_value"] = e.model_value;
        out["residual"] = e.residual;
        out["scaled_residual"] = e.scaled_residual;
    };
    if (what == "sum") {
        out["what"] = "prime_reciprocal_sum";
        put_eval(lehmer::prime_reciprocal_sum(x));
    } else if (what == "logp") {
        out["what"] = "log_p_over_p_sum";
        put_eval(lehmer::log_p_over_p_sum(x));
    } else if (what == "product") {
        out["what"] = "euler_product";
        lehmer::MertensEvaluation e = lehmer::euler_product(x);
        put_eval(e);
        out["raw_times_log_x"] = e.raw_times_log_x();
    } else if (what == "mobius") {
        lehmer::Natural N = static_cast<lehmer::Natural>(x);
        out["what"] = "mobius_series";
        out["N"] = N;
        out["partial_sum"] = lehmer::mobius_series_partial(N);
        out["mertens_M"] = lehmer::mertens_function(N);
    } else if (what == "theta") {
        out["what"] = "chebyshev_theta";
        out["x"] = x;
        double theta = lehmer::chebyshev_theta(x);
        out["theta"] = theta;
        out["theta_over_x"] = theta / x;
    } else if (what == "constant") {
        out["what"] = "mertens_constant_estimate";
        out["x"] = x;
        double estimate = lehmer::estimate_mertens_constant(x);
        out["estimate"] = estimate;
        out["reference"] = lehmer::constants.mertens_a;
        out["abs_error"] = std::abs(estimate - lehmer::constants.mertens_a);
    } else {  // bound
        out["what"] = "lower_bound_check";
        out["x"] = x;
        out["c"] = c;
        out["include_two"] = include_two;
        lehmer::LowerBoundCheck check = lehmer::lower_bound_check(x, c, include_two);
        out["holds"] = check.holds;
        out["margin"] = check.margin;
    }
    render(out, opts.format);
    return kExitOk;
}

int run_search(lehmer::SearchConfig cfg, bool filters_given, const CommonOpts& opts) {
    // plus-only hunts restrict to the proven-necessary shape unless told not to
    if (!filters_given && cfg.target_plus && !cfg.target_minus) {
        cfg.filters.odd_only = true;
        cfg.filters.square_free_only = true;
    }

    auto progress = [](unsigned done, unsigned total, double rate) {
        std::fprintf(stderr, "segments %u/%u  %.3g candidates/s\n", done, total, rate);
    };
    lehmer::SearchResult result = lehmer::search_range(cfg, progress);

    json out = json::object();
    out["lo"] = cfg.lo;
    out["hi"] = cfg.hi;
    std::string targets;
    if (cfg.target_plus) targets += "plus";
    if (cfg.target_minus) targets += targets.empty() ? "minus" : ",minus";
    out["targets"] = targets;
    out["workers"] = cfg.workers;
    out["segment_size"] = cfg.segment_size;
    out["odd_only"] = cfg.filters.odd_only;
    out["square_free_only"] = cfg.filters.square_free_only;
    out["min_omega"] = cfg.filters.min_omega;
    out["candidates_scanned"] = result.candidates_scanned;
    out["segments_done"] = result.segments_done;
    out["segments_total"] = result.segments_total;
    out["finished"] = result.finished;
    out["wall_seconds"] = result.wall_seconds;

    std::size_t plus_count = 0, minus_count = 0;
    json hits = json::array();
    for (const lehmer::SearchHit& h : result.hits) {
        (h.kind == lehmer::HitKind::plus ? plus_count : minus_count) += 1;
        hits.push_back(hit_to_json(h));
    }
    out["hits_plus"] = plus_count;
    out["hits_minus"] = minus_count;
    out["hits"] = hits;
    render(out, opts.format);

    return plus_count > 0 ? kExitPlusHit : kExitOk;
}

int run_reproduce(const CommonOpts& opts) {
    lehmer::ExampleReport report = lehmer::reproduce_example();
    json out = json::object();
    out["n"] = 65535;
    out["minus_equation"] = report.minus_solution ? "solution" : "no solution";
    out["plus_equation"] = report.plus_solution ? "solution" : "no solution";
    out["max_abs_deviation"] = report.max_abs_deviation;
    out["pass"] = report.all_within_tolerance;
    json rows = json::array();
    for (const lehmer::ExampleRow& row : report.rows) {
        json r = json::object();
        r["name"] = row.name;
        r["computed"] = row.computed;
        r["reference"] = row.reference;
        r["abs_diff"] = row.abs_diff;
        r["tolerance"] = row.tolerance;
        r["relative"] = row.relative;
        r["pass"] = row.pass;
        rows.push_back(r);
    }
    out["rows"] = rows;
    render(out, opts.format);
    return report.all_within_tolerance ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lehmer totient problem toolkit: congruence checks, Mertens "
                 "evaluators, analysis records, and range search"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts opts;

    // check
    auto* cmd_check = app.add_subcommand("check", "Lehmer congruence verdict for n");
    lehmer::Natural check_n = 0;
    lehmer::Natural check_kmin = lehmer::omega_presets.lehmer;
    cmd_check->add_option("n", check_n, "Integer to test (>= 2)")->required();
    cmd_check->add_option("--k-min", check_kmin, "Distinct-prime threshold")
        ->capture_default_str();
    add_format_option(cmd_check, opts);

    // analyze
    auto* cmd_analyze = app.add_subcommand(
        "analyze", "Residual analysis for an odd square-free composite n");
    lehmer::Natural analyze_n = 0;
    double analyze_c = 0.09;
    lehmer::Natural analyze_j = 1;
    std::string analyze_mode = "bounded";
    std::string analyze_product = "partial";
    cmd_analyze->add_option("n", analyze_n, "Integer to analyze")->required();
    auto* c_opt = cmd_analyze->add_option(
        "--c", analyze_c, "Bound constant (0.09 or 0.3; default picks by p_k)");
    cmd_analyze->add_option("--j", analyze_j, "Minus-side offset (>= 1)")
        ->capture_default_str();
    cmd_analyze->add_option("--mode", analyze_mode, "bounded|asymptotic")
        ->check(CLI::IsMember({"bounded", "asymptotic"}))
        ->capture_default_str();
    cmd_analyze->add_option("--product", analyze_product,
                            "asymptotic product mode: full|partial")
        ->check(CLI::IsMember({"full", "partial"}))
        ->capture_default_str();
    add_format_option(cmd_analyze, opts);

    // mertens
    auto* cmd_mertens = app.add_subcommand("mertens", "Mertens-theorem evaluators");
    std::string mertens_what;
    double mertens_x = 0;
    double mertens_c = lehmer::constants.c_small;
    bool mertens_no_two = false;
    cmd_mertens->add_option("--what", mertens_what, "Evaluator to run")
        ->check(CLI::IsMember({"sum", "product", "mobius", "theta", "constant",
                               "bound", "logp"}))
        ->required();
    cmd_mertens->add_option("--x", mertens_x, "Evaluation point")->required();
    cmd_mertens->add_option("--c", mertens_c, "Constant for --what bound")
        ->capture_default_str();
    cmd_mertens->add_flag("--exclude-two", mertens_no_two,
                          "Drop the p=2 factor in --what bound");
    add_format_option(cmd_mertens, opts);

    // search
    auto* cmd_search = app.add_subcommand("search", "Range search for solutions");
    lehmer::SearchConfig cfg;
    std::vector<std::string> target_names;
    std::string checkpoint_path, output_path;
    bool odd_only = false, square_free_only = false;
    lehmer::Natural min_omega = 0;
    cmd_search->add_option("--lo", cfg.lo, "Range start (inclusive)")
        ->capture_default_str();
    cmd_search->add_option("--hi", cfg.hi, "Range end (exclusive)")->required();
    cmd_search
        ->add_option("--targets", target_names, "plus, minus, or both (comma-separated)")
        ->required()
        ->delimiter(',');
    cmd_search->add_option("--workers", cfg.workers, "Worker threads")
        ->envname("LEHMER_WORKERS")
        ->capture_default_str();
    cmd_search->add_option("--segment-size", cfg.segment_size, "Sieve segment length")
        ->envname("LEHMER_SEGMENT_SIZE")
        ->capture_default_str();
    cmd_search->add_option("--checkpoint", checkpoint_path, "Checkpoint file path");
    cmd_search->add_option("--out", output_path, "Hit output file path");
    auto* f1 = cmd_search->add_flag("--odd-only", odd_only, "Skip even candidates");
    auto* f2 = cmd_search->add_flag("--square-free-only", square_free_only,
                                    "Skip candidates with square factors");
    auto* f3 = cmd_search->add_option("--min-omega", min_omega,
                                      "Minimum distinct prime factors");
    cmd_search->add_option("--max-segments", cfg.max_segments_per_run,
                           "Stop after this many segments (0 = all)");
    add_format_option(cmd_search, opts);

    // reproduce
    auto* cmd_reproduce = app.add_subcommand(
        "reproduce", "Recompute the n = 65535 worked example against references");
    add_format_option(cmd_reproduce, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_check->parsed()) return run_check(check_n, check_kmin, opts);
        if (cmd_analyze->parsed())
            return run_analyze(analyze_n, analyze_c, c_opt->count() > 0, analyze_j,
                               analyze_mode, analyze_product, opts);
        if (cmd_mertens->parsed())
            return run_mertens(mertens_what, mertens_x, mertens_c, !mertens_no_two, opts);
        if (cmd_search->parsed()) {
            for (const std::string& t : target_names) {
                if (t == "plus")
                    cfg.target_plus = true;
                else if (t == "minus")
                    cfg.target_minus = true;
                else
                    throw CLI::ValidationError("--targets", "unknown target: " + t);
            }
            cfg.filters.odd_only = odd_only;
            cfg.filters.square_free_only = square_free_only;
            cfg.filters.min_omega = min_omega;
            if (!checkpoint_path.empty()) cfg.checkpoint_path = checkpoint_path;
            if (!output_path.empty()) cfg.output_path = output_path;
            bool filters_given = f1->count() > 0 || f2->count() > 0 || f3->count() > 0;
            return run_search(cfg, filters_given, opts);
        }
        if (cmd_reproduce->parsed()) return run_reproduce(opts);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}
