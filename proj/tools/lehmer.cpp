// Command-line front end: single-polynomial analysis, family scans, property
// verification suites, and threshold tables.
//
// Exit codes: 0 success, 1 property violation, 2 invalid input,
//             3 precision exhausted.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lehmer/report.hpp"
#include "lehmer/scan.hpp"
#include "lehmer/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitPrecision = 3;

struct DegreeRange {
    unsigned lo = 1, hi = 4;
};

DegreeRange parse_degrees(const std::string& text) {
    auto dots = text.find("..");
    DegreeRange r;
    try {
        if (dots == std::string::npos) {
            r.lo = r.hi = static_cast<unsigned>(std::stoul(text));
        } else {
            r.lo = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
            r.hi = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
        }
    } catch (...) {
        throw lehmer::invalid_input("cannot parse degree range '" + text + "' (expected A..B)");
    }
    return r;
}

int cmd_analyze(const std::string& poly_text, const lehmer::AnalyzeOptions& opts, bool record_only) {
    lehmer::IntPoly f = lehmer::parse_poly(poly_text);
    lehmer::BoundReport rep = lehmer::analyze(f, opts);
    if (!record_only) {
        lehmer::print_report(std::cout, rep);
        std::cout << "\n";
    }
    std::cout << lehmer::serialize_record(lehmer::make_record(rep)) << "\n";
    return kExitOk;
}

int cmd_scan(lehmer::ScanConfig cfg, const std::string& csv_path) {
    lehmer::ScanOutcome outcome;
    if (cfg.out_path.empty()) {
        outcome = lehmer::run_scan(cfg, &std::cout);
        std::cerr << outcome.summary.to_text();
    } else {
        outcome = lehmer::run_scan(cfg);
        std::cout << outcome.summary.to_text();
        std::cout << "records written: " << outcome.records_written
                  << (outcome.stopped_early ? " (stopped early)" : "") << "\n";
    }
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::trunc);
        if (!csv.good()) throw lehmer::invalid_input("cannot open csv path " + csv_path);
        csv << outcome.summary.to_csv();
    }
    const auto& s = outcome.summary;
    if (s.safety_violations || s.valuation_violations || s.mahler_violations) return kExitViolation;
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    auto results = lehmer::verify_suites(suite, seed);
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%-10s checks %6ld  violations %4ld  worst margin %.6g\n", r.name.c_str(),
                    r.checks, r.violations, r.worst_margin);
        for (const auto& note : r.notes) std::printf("           %s\n", note.c_str());
        ok &= r.passed();
    }
    return ok ? kExitOk : kExitViolation;
}

int cmd_thresholds(unsigned d, std::uint64_t p, unsigned f, unsigned e, double c) {
    lehmer::LocalFieldDescriptor K{p, e, f};
    auto guarantee = lehmer::guarantee_threshold(d, K, c);
    auto growth = lehmer::growth_criterion(d, K, 0);
    std::printf("local field        p=%llu e=%u f=%u (q=%.0f, n=%.0f)\n",
                static_cast<unsigned long long>(p), e, f, K.q(), K.n());
    std::printf("degree             %u\n", d);
    std::printf("guarantee h>=c/d   c=%.6g  threshold %.4f  required count %lu  %s\n", c,
                guarantee.threshold, guarantee.required_count,
                guarantee.feasible ? "feasible" : "infeasible (exceeds degree)");
    std::printf("growth criterion   threshold %.4f  required count %lu  %s\n", growth.threshold,
                growth.required_count, growth.feasible ? "feasible" : "infeasible (exceeds degree)");
    std::printf("  (members get d*h >= 0.4 log d - log(q)/(2n) = %.6g)\n", growth.guaranteed_growth);
    std::printf("reference liminf   log(p)/(2e(q+1)) = %.6g\n",
                lehmer::bz_reference_constant(p, e, f));
    if (f == 1 && e == 1)
        std::printf("totally p-adic     limit constant log(p)/(2p) = %.6g, Pottmeyer %.6g\n",
                    std::log(static_cast<double>(p)) / (2.0 * static_cast<double>(p)),
                    lehmer::pottmeyer_constant(p));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Weil heights, p-adic local statistics, and height lower bounds "
                 "for algebraic numbers given by integer polynomials"};
    app.require_subcommand(1);

    // analyze
    std::string poly_text;
    bool record_only = false;
    lehmer::AnalyzeOptions aopts;
    auto* analyze_cmd = app.add_subcommand("analyze", "analyze one polynomial");
    analyze_cmd->add_option("polynomial", poly_text,
                            "caret expression (\"x^3-2x+1\") or coefficient list (\"[1,-2,0,1]\")")
        ->required();
    analyze_cmd->add_option("--primes", aopts.primes, "primes for local analysis")->delimiter(',');
    analyze_cmd->add_option("--fmax", aopts.f_max, "max unramified level (default 3)");
    analyze_cmd->add_option("--tolerance", aopts.tolerance, "height error tolerance");
    analyze_cmd->add_option("--seed", aopts.seed, "seed for the splitting PRNG");
    analyze_cmd->add_flag("--record", record_only, "print only the machine record");

    // scan
    lehmer::ScanConfig cfg;
    std::string degrees_text = "1..4";
    std::string csv_path;
    auto* scan_cmd = app.add_subcommand("scan", "enumerate and analyze a polynomial family");
    scan_cmd->add_option("--degrees", degrees_text, "degree range A..B")->required();
    scan_cmd->add_option("--coef-bound", cfg.coef_bound, "max |coefficient|")->required();
    scan_cmd->add_flag("--monic", cfg.monic_only, "monic polynomials only");
    scan_cmd->add_option("--primes", cfg.primes, "primes for local analysis")->delimiter(',');
    scan_cmd->add_option("--fmax", cfg.f_max, "max unramified level (default 3)");
    scan_cmd->add_option("--c", cfg.c_param, "guarantee-threshold parameter c");
    scan_cmd->add_option("--out", cfg.out_path, "record output path (enables resume)");
    scan_cmd->add_option("--workers", cfg.workers, "worker threads");
    scan_cmd->add_option("--seed", cfg.seed, "seed for the splitting PRNG");
    scan_cmd->add_option("--tolerance", cfg.tolerance, "height error tolerance");
    scan_cmd->add_flag("--timings", cfg.emit_timings, "include per-record timing (breaks byte determinism)");
    scan_cmd->add_option("--stop-after", cfg.stop_after, "stop after N records (resume testing aid)");
    scan_cmd->add_option("--csv", csv_path, "write the summary as CSV to this path");

    // verify
    std::string suite;
    std::uint64_t verify_seed = 0;
    auto* verify_cmd = app.add_subcommand("verify", "run a property-verification suite");
    verify_cmd->add_option("suite", suite, "heights | padic | bounds | mignotte | all")->required();
    verify_cmd->add_option("--seed", verify_seed, "seed");

    // thresholds
    unsigned th_d = 100, th_f = 1, th_e = 1;
    std::uint64_t th_p = 2;
    double th_c = 0.69314718055994531;
    auto* th_cmd = app.add_subcommand("thresholds", "conjugate-count thresholds for a local field");
    th_cmd->add_option("--d", th_d, "degree")->required();
    th_cmd->add_option("--p", th_p, "prime")->required();
    th_cmd->add_option("--f", th_f, "inertia degree (default 1)");
    th_cmd->add_option("--e", th_e, "ramification index (default 1)");
    th_cmd->add_option("--c", th_c, "guarantee parameter c (default log 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(poly_text, aopts, record_only);
        if (*scan_cmd) {
            DegreeRange r = parse_degrees(degrees_text);
            cfg.deg_min = r.lo;
            cfg.deg_max = r.hi;
            cfg.validate();
            return cmd_scan(cfg, csv_path);
        }
        if (*verify_cmd) return cmd_verify(suite, verify_seed);
        if (*th_cmd) {
            if (!lehmer::is_prime_u64(th_p)) throw lehmer::invalid_input("--p must be prime");
            if (th_d < 2) throw lehmer::invalid_input("--d must be at least 2");
            if (th_f < 1 || th_e < 1) throw lehmer::invalid_input("--f and --e must be positive");
            return cmd_thresholds(th_d, th_p, th_f, th_e, th_c);
        }
    } catch (const lehmer::invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const lehmer::precision_exhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const lehmer::boundary_ambiguous& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}
