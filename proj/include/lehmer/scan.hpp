#pragma once

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "lehmer/errors.hpp"
#include "lehmer/report.hpp"

namespace lehmer {

// Scan configuration. The serialized form deliberately excludes the worker
// count and output path: the record stream must be byte-identical for any
// worker count, and the header is part of the stream.
struct ScanConfig {
    unsigned deg_min = 1;
    unsigned deg_max = 4;
    long coef_bound = 3;
    bool monic_only = false;
    std::vector<std::uint64_t> primes{2, 3, 5, 7};
    unsigned f_max = 3;
    double c_param = 0.69314718055994531; // log 2
    double tolerance = 1e-12;
    std::uint64_t seed = 0;
    bool emit_timings = false;

    // runtime-only knobs (not serialized)
    std::string out_path;
    unsigned workers = 1;
    unsigned long stop_after = 0; // 0 = unlimited; testing aid for resume checks

    void validate() const {
        if (deg_min < 1 || deg_min > deg_max) throw invalid_input("scan: empty or invalid degree range");
        if (deg_max > 12) throw invalid_input("scan: degree range too large (max 12)");
        if (coef_bound < 1) throw invalid_input("scan: coefficient bound must be positive");
        if (primes.empty()) throw invalid_input("scan: prime set must be nonempty");
        for (auto p : primes)
            if (!is_prime_u64(p)) throw invalid_input("scan: " + std::to_string(p) + " is not prime");
        if (f_max < 1 || f_max > 3)
            throw invalid_input("scan: f_max must be in [1,3] (composite levels unsupported)");
        if (c_param <= 0) throw invalid_input("scan: c must be positive");
        if (tolerance <= 0 || tolerance > 1e-3) throw invalid_input("scan: tolerance out of range");
        if (workers < 1 || workers > 256) throw invalid_input("scan: workers must be in [1,256]");
        double logcount = (deg_max + 1) * std::log2(2.0 * coef_bound + 1.0);
        if (logcount > 61) throw invalid_input("scan: enumeration space exceeds 2^61");
    }

    std::string serialize() const {
        std::ostringstream os;
        os << "degrees=" << deg_min << ".." << deg_max << " coef=" << coef_bound
           << " monic=" << (monic_only ? 1 : 0) << " primes=";
        for (std::size_t i = 0; i < primes.size(); ++i) os << (i ? "," : "") << primes[i];
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c_param);
        os << " fmax=" << f_max << " c=" << buf;
        std::snprintf(buf, sizeof buf, "%.17g", tolerance);
        os << " tol=" << buf << " seed=" << seed << " timings=" << (emit_timings ? 1 : 0);
        return os.str();
    }

    static ScanConfig parse(const std::string& text);

    bool stream_compatible(const ScanConfig& o) const { return serialize() == o.serialize(); }
};

namespace scan_detail {

inline std::map<std::string, std::string> tokenize(const std::string& line) {
    std::map<std::string, std::string> kv;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else
            cur.push_back(ch);
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s) {
    try {
        return std::stod(s);
    } catch (...) {
        throw invalid_input("malformed numeric field '" + s + "'");
    }
}

} // namespace scan_detail

inline ScanConfig ScanConfig::parse(const std::string& text) {
    auto kv = scan_detail::tokenize(text);
    ScanConfig c;
    try {
        auto range = scan_detail::split(kv.at("degrees"), '.');
        if (range.size() != 3 || !range[1].empty()) throw invalid_input("bad degree range");
        c.deg_min = static_cast<unsigned>(std::stoul(range[0]));
        c.deg_max = static_cast<unsigned>(std::stoul(range[2]));
        c.coef_bound = std::stol(kv.at("coef"));
        c.monic_only = kv.at("monic") == "1";
        c.primes.clear();
        for (const auto& p : scan_detail::split(kv.at("primes"), ','))
            c.primes.push_back(std::stoull(p));
        c.f_max = static_cast<unsigned>(std::stoul(kv.at("fmax")));
        c.c_param = scan_detail::parse_double(kv.at("c"));
        c.tolerance = scan_detail::parse_double(kv.at("tol"));
        c.seed = std::stoull(kv.at("seed"));
        c.emit_timings = kv.at("timings") == "1";
    } catch (const std::out_of_range&) {
        throw invalid_input("scan config line is missing fields");
    } catch (const std::invalid_argument&) {
        throw invalid_input("scan config line is malformed");
    }
    return c;
}

// One scan record: the machine-readable residue of a BoundReport. Serialized
// as a single self-describing key=value line; parse(serialize(r)) == r.
struct PrimeSummary {
    std::uint64_t p = 0;
    unsigned long ord_disc = 0;
    unsigned unaccounted = 0;
    bool flagged = false;
    std::vector<unsigned> membership;   // per level 1..f_max
    std::vector<unsigned> integral;     // r' per level
    std::vector<unsigned> generators;   // exact-generator counts per level
    std::vector<long> val_margins;      // valuation-inequality margins per level
    std::vector<std::map<std::uint64_t, unsigned>> histograms;     // per level, residue index -> count
    std::map<unsigned, std::map<std::uint64_t, unsigned>> gen_hist; // level >= 2

    bool operator==(const PrimeSummary&) const = default;
};

struct ResultRecord {
    IntPoly poly;
    unsigned degree = 0;
    bool irreducible = false, torsion = false, monic = false, ramified_dropped = false;
    bool vacuous = false, safe = true;
    double h = 0, herr = 0, mahler = 0;
    std::vector<double> single_field; // (p asc, level asc)
    std::optional<double> multi, fieldwise, collision;
    double mahler_margin = 0;
    long timing_ms = -1; // -1 = absent

    std::vector<PrimeSummary> primes;

    bool operator==(const ResultRecord& o) const {
        return poly == o.poly && degree == o.degree && irreducible == o.irreducible &&
               torsion == o.torsion && monic == o.monic && ramified_dropped == o.ramified_dropped &&
               vacuous == o.vacuous && safe == o.safe && h == o.h && herr == o.herr &&
               mahler == o.mahler && single_field == o.single_field && multi == o.multi &&
               fieldwise == o.fieldwise && collision == o.collision &&
               mahler_margin == o.mahler_margin && timing_ms == o.timing_ms && primes == o.primes;
    }
};

inline ResultRecord make_record(const BoundReport& rep, bool with_timing = false, long ms = 0) {
    ResultRecord r;
    r.poly = rep.poly;
    r.degree = rep.degree;
    r.irreducible = rep.irreducible();
    r.torsion = rep.torsion;
    r.monic = rep.monic;
    r.ramified_dropped = rep.ramified_dropped;
    r.vacuous = rep.vacuous;
    r.safe = rep.safety_ok;
    r.h = rep.h();
    r.herr = rep.height.height_error();
    r.mahler = rep.height.mahler();
    for (const auto& e : rep.single_field) r.single_field.push_back(e.value);
    if (rep.multi_available) {
        r.multi = rep.multi_field;
        r.fieldwise = rep.fieldwise;
        r.collision = rep.collision_exact;
    }
    r.mahler_margin = rep.mahler_margin.margin;
    if (with_timing) r.timing_ms = ms;

    std::size_t vm_index = 0;
    for (const auto& prof : rep.profiles) {
        PrimeSummary s;
        s.p = prof.p;
        s.ord_disc = prof.ord_p_disc;
        s.unaccounted = prof.unaccounted_count;
        s.flagged = prof.ramified_or_deep;
        for (const auto& st : prof.levels) {
            s.membership.push_back(st.membership_count);
            s.integral.push_back(st.integral_count);
            std::map<std::uint64_t, unsigned> hist;
            for (const auto& [res, n] : st.residue_histogram) hist[res.encode(*st.field)] = n;
            s.histograms.push_back(std::move(hist));
            s.val_margins.push_back(rep.valuation_margins[vm_index++].margin);
        }
        for (const auto& [lvl, n] : prof.exact_generator_counts) s.generators.push_back(n);
        for (const auto& [lvl, hist] : prof.exact_generator_histograms) {
            if (lvl == 1) continue;
            std::map<std::uint64_t, unsigned> h2;
            const auto& field = *prof.levels[lvl - 1].field;
            for (const auto& [res, n] : hist) h2[res.encode(field)] = n;
            s.gen_hist[lvl] = std::move(h2);
        }
        r.primes.push_back(std::move(s));
    }
    return r;
}

namespace scan_detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string hist_str(const std::map<std::uint64_t, unsigned>& h) {
    if (h.empty()) return "-";
    std::ostringstream os;
    bool first = true;
    for (const auto& [res, n] : h) {
        if (!first) os << ",";
        os << res << ":" << n;
        first = false;
    }
    return os.str();
}

inline std::map<std::uint64_t, unsigned> parse_hist(const std::string& s) {
    std::map<std::uint64_t, unsigned> out;
    if (s == "-") return out;
    for (const auto& item : split(s, ',')) {
        auto pair = split(item, ':');
        if (pair.size() != 2) throw invalid_input("malformed histogram '" + s + "'");
        out[std::stoull(pair[0])] = static_cast<unsigned>(std::stoul(pair[1]));
    }
    return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& to_str) {
    if (v.empty()) return "-";
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_str(v[i]);
    return os.str();
}

} // namespace scan_detail

inline std::string serialize_record(const ResultRecord& r) {
    using namespace scan_detail;
    std::ostringstream os;
    os << "poly=" << r.poly.coeff_list_string() << " d=" << r.degree;
    os << " irr=" << r.irreducible << " tor=" << r.torsion << " mon=" << r.monic
       << " rmd=" << r.ramified_dropped << " vac=" << r.vacuous << " safe=" << r.safe;
    os << " h=" << fmt17(r.h) << " herr=" << fmt17(r.herr) << " M=" << fmt17(r.mahler);
    os << " sf=" << join(r.single_field, [](double v) { return fmt17(v); });
    os << " mf=" << (r.multi ? fmt17(*r.multi) : "-");
    os << " fw=" << (r.fieldwise ? fmt17(*r.fieldwise) : "-");
    os << " xc=" << (r.collision ? fmt17(*r.collision) : "-");
    os << " mah=" << fmt17(r.mahler_margin);
    for (const auto& s : r.primes) {
        std::string k = "p" + std::to_string(s.p);
        os << " " << k << ".D=" << s.ord_disc << " " << k << ".u=" << s.unaccounted << " " << k
           << ".rf=" << s.flagged;
        os << " " << k << ".m=" << join(s.membership, [](unsigned v) { return std::to_string(v); });
        os << " " << k << ".r=" << join(s.integral, [](unsigned v) { return std::to_string(v); });
        os << " " << k << ".g=" << join(s.generators, [](unsigned v) { return std::to_string(v); });
        os << " " << k << ".vm=" << join(s.val_margins, [](long v) { return std::to_string(v); });
        for (std::size_t lvl = 0; lvl < s.histograms.size(); ++lvl)
            os << " " << k << ".h" << (lvl + 1) << "=" << hist_str(s.histograms[lvl]);
        for (const auto& [lvl, h] : s.gen_hist) os << " " << k << ".G" << lvl << "=" << hist_str(h);
    }
    if (r.timing_ms >= 0) os << " ms=" << r.timing_ms;
    return os.str();
}

inline ResultRecord parse_record(const std::string& line) {
    using namespace scan_detail;
    auto kv = tokenize(line);
    ResultRecord r;
    try {
        r.poly = parse_poly(kv.at("poly"));
        r.degree = static_cast<unsigned>(std::stoul(kv.at("d")));
        r.irreducible = kv.at("irr") == "1";
        r.torsion = kv.at("tor") == "1";
        r.monic = kv.at("mon") == "1";
        r.ramified_dropped = kv.at("rmd") == "1";
        r.vacuous = kv.at("vac") == "1";
        r.safe = kv.at("safe") == "1";
        r.h = parse_double(kv.at("h"));
        r.herr = parse_double(kv.at("herr"));
        r.mahler = parse_double(kv.at("M"));
        if (kv.at("sf") != "-")
            for (const auto& v : split(kv.at("sf"), ',')) r.single_field.push_back(parse_double(v));
        if (kv.at("mf") != "-") r.multi = parse_double(kv.at("mf"));
        if (kv.at("fw") != "-") r.fieldwise = parse_double(kv.at("fw"));
        if (kv.at("xc") != "-") r.collision = parse_double(kv.at("xc"));
        r.mahler_margin = parse_double(kv.at("mah"));
        if (kv.count("ms")) r.timing_ms = std::stol(kv.at("ms"));

        std::map<std::uint64_t, PrimeSummary> primes;
        for (const auto& [key, value] : kv) {
            if (key.size() < 3 || key[0] != 'p') continue;
            auto dot = key.find('.');
            if (dot == std::string::npos) continue;
            std::uint64_t p = 0;
            try {
                p = std::stoull(key.substr(1, dot - 1));
            } catch (...) {
                continue;
            }
            PrimeSummary& s = primes[p];
            s.p = p;
            std::string field = key.substr(dot + 1);
            if (field == "D") s.ord_disc = std::stoul(value);
            else if (field == "u") s.unaccounted = static_cast<unsigned>(std::stoul(value));
            else if (field == "rf") s.flagged = value == "1";
            else if (field == "m") {
                if (value != "-")
                    for (const auto& v : split(value, ','))
                        s.membership.push_back(static_cast<unsigned>(std::stoul(v)));
            } else if (field == "r") {
                if (value != "-")
                    for (const auto& v : split(value, ','))
                        s.integral.push_back(static_cast<unsigned>(std::stoul(v)));
            } else if (field == "g") {
                if (value != "-")
                    for (const auto& v : split(value, ','))
                        s.generators.push_back(static_cast<unsigned>(std::stoul(v)));
            } else if (field == "vm") {
                if (value != "-")
                    for (const auto& v : split(value, ',')) s.val_margins.push_back(std::stol(v));
            } else if (field[0] == 'h') {
                std::size_t lvl = std::stoul(field.substr(1));
                if (s.histograms.size() < lvl) s.histograms.resize(lvl);
                s.histograms[lvl - 1] = parse_hist(value);
            } else if (field[0] == 'G') {
                unsigned lvl = static_cast<unsigned>(std::stoul(field.substr(1)));
                s.gen_hist[lvl] = parse_hist(value);
            }
        }
        for (auto& [p, s] : primes) r.primes.push_back(std::move(s));
    } catch (const std::out_of_range&) {
        throw invalid_input("record line is missing fields");
    } catch (const std::invalid_argument&) {
        throw invalid_input("record line is malformed");
    }
    return r;
}

// ---- canonical enumeration ----
//
// Canonical order: degree ascending, then the ascending coefficient tuple
// (a_0, ..., a_d) lexicographically. Sign symmetry f ~ -f is removed by
// enumerating positive leading coefficients only (heights, discriminants and
// local statistics are invariant under negation).

namespace scan_detail {

struct Enumeration {
    unsigned deg_min, deg_max;
    long bound;
    bool monic;
    std::vector<unsigned long> degree_counts; // tuples per degree
    unsigned long total = 0;

    Enumeration(const ScanConfig& cfg)
        : deg_min(cfg.deg_min), deg_max(cfg.deg_max), bound(cfg.coef_bound), monic(cfg.monic_only) {
        const unsigned long base = 2 * static_cast<unsigned long>(bound) + 1;
        const unsigned long lead = monic ? 1 : static_cast<unsigned long>(bound);
        for (unsigned d = deg_min; d <= deg_max; ++d) {
            unsigned long n = lead;
            for (unsigned i = 0; i < d; ++i) n *= base;
            degree_counts.push_back(n);
            total += n;
        }
    }

    // index -> candidate polynomial (before the a_0/primitive/irreducible filters)
    IntPoly decode(unsigned long index) const {
        const unsigned long base = 2 * static_cast<unsigned long>(bound) + 1;
        unsigned d = deg_min;
        for (unsigned long n : degree_counts) {
            if (index < n) break;
            index -= n;
            ++d;
        }
        const unsigned long lead_count = monic ? 1 : static_cast<unsigned long>(bound);
        std::vector<BigInt> c(d + 1);
        unsigned long lead_digit = index % lead_count;
        unsigned long rest = index / lead_count;
        for (unsigned j = d; j-- > 0;) { // a_{d-1} is the fastest-varying digit
            c[j] = static_cast<long>(rest % base) - bound;
            rest /= base;
        }
        c[d] = monic ? 1 : static_cast<long>(lead_digit) + 1;
        return IntPoly(std::move(c));
    }

    // inverse of decode for resume: position of a canonical polynomial
    unsigned long encode(const IntPoly& f) const {
        const unsigned long base = 2 * static_cast<unsigned long>(bound) + 1;
        const unsigned d = static_cast<unsigned>(f.degree());
        unsigned long index = 0;
        for (unsigned dd = deg_min; dd < d; ++dd) index += degree_counts[dd - deg_min];
        unsigned long rest = 0;
        for (unsigned j = 0; j < d; ++j)
            rest = rest * base + static_cast<unsigned long>(f[j].get_si() + bound);
        const unsigned long lead_count = monic ? 1 : static_cast<unsigned long>(bound);
        unsigned long lead_digit = monic ? 0 : static_cast<unsigned long>(f[d].get_si() - 1);
        return index + rest * lead_count + lead_digit;
    }
};

} // namespace scan_detail

// Scan summary: extremes and violation tallies over the emitted records.
struct ScanSummary {
    unsigned long candidates = 0;
    unsigned long analyzed = 0;
    unsigned long reducible_skipped = 0;
    unsigned long unverified_skipped = 0;
    unsigned long torsion_count = 0;
    unsigned long safety_violations = 0;
    unsigned long valuation_violations = 0;
    unsigned long mahler_violations = 0;
    double min_height = std::numeric_limits<double>::infinity();
    std::string min_height_poly;
    double best_single_ratio = -std::numeric_limits<double>::infinity();
    double best_multi_ratio = -std::numeric_limits<double>::infinity();
    double best_collision_ratio = -std::numeric_limits<double>::infinity();

    void absorb(const ResultRecord& r) {
        ++analyzed;
        if (r.torsion) ++torsion_count;
        if (!r.vacuous && !r.safe) ++safety_violations;
        if (!r.vacuous && r.mahler_margin < 0) ++mahler_violations;
        for (const auto& s : r.primes)
            for (long m : s.val_margins)
                if (m < 0) ++valuation_violations;
        if (!r.torsion && r.h < min_height) {
            min_height = r.h;
            min_height_poly = r.poly.coeff_list_string();
        }
        if (!r.vacuous && r.h > 0) {
            for (double v : r.single_field) best_single_ratio = std::max(best_single_ratio, v / r.h);
            if (r.multi) best_multi_ratio = std::max(best_multi_ratio, *r.multi / r.h);
            if (r.collision) best_collision_ratio = std::max(best_collision_ratio, *r.collision / r.h);
        }
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "candidates " << candidates << ", analyzed " << analyzed << ", reducible "
           << reducible_skipped << ", unverified " << unverified_skipped << ", torsion "
           << torsion_count << "\n";
        os << "violations: safety " << safety_violations << ", valuation " << valuation_violations
           << ", mahler " << mahler_violations << "\n";
        if (analyzed > torsion_count)
            os << "min height " << scan_detail::fmt17(min_height) << " at " << min_height_poly << "\n";
        os << "bound tightness (best bound/h): single " << scan_detail::fmt17(best_single_ratio)
           << ", multi " << scan_detail::fmt17(best_multi_ratio) << ", exact-collision "
           << scan_detail::fmt17(best_collision_ratio) << "\n";
        return os.str();
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "metric,value\n";
        os << "candidates," << candidates << "\n";
        os << "analyzed," << analyzed << "\n";
        os << "reducible," << reducible_skipped << "\n";
        os << "unverified," << unverified_skipped << "\n";
        os << "torsion," << torsion_count << "\n";
        os << "safety_violations," << safety_violations << "\n";
        os << "valuation_violations," << valuation_violations << "\n";
        os << "mahler_violations," << mahler_violations << "\n";
        os << "min_height," << scan_detail::fmt17(min_height) << "\n";
        os << "min_height_poly," << min_height_poly << "\n";
        os << "best_single_ratio," << scan_detail::fmt17(best_single_ratio) << "\n";
        os << "best_multi_ratio," << scan_detail::fmt17(best_multi_ratio) << "\n";
        os << "best_collision_ratio," << scan_detail::fmt17(best_collision_ratio) << "\n";
        return os.str();
    }
};

struct ScanOutcome {
    ScanSummary summary;
    unsigned long records_written = 0;
    bool stopped_early = false;
};

inline std::string scan_header(const ScanConfig& cfg) {
    return "# lehmer scan v1 " + cfg.serialize();
}

// Runs the scan, streaming records in canonical order. When `cfg.out_path` is
// set, output is append-only with a header line; an existing stream with a
// matching header is resumed after its last complete record. Parallel workers
// partition the enumeration into contiguous chunks; a bounded reorder buffer
// restores canonical order, so the byte stream is worker-count invariant.
inline ScanOutcome run_scan(const ScanConfig& cfg, std::ostream* direct_out = nullptr) {
    cfg.validate();
    scan_detail::Enumeration enumeration(cfg);

    ScanOutcome outcome;
    unsigned long resume_after = 0; // global index; records with index < resume_after are done
    std::ofstream file;
    std::ostream* out = direct_out;

    if (!cfg.out_path.empty()) {
        std::string content;
        {
            std::ifstream existing(cfg.out_path, std::ios::binary);
            if (existing.good())
                content.assign(std::istreambuf_iterator<char>(existing),
                               std::istreambuf_iterator<char>());
        }
        std::size_t header_end = content.find('\n');
        if (header_end == std::string::npos) {
            // missing or torn header: start a fresh stream
            file.open(cfg.out_path, std::ios::trunc);
            file << scan_header(cfg) << "\n";
        } else {
            if (content.substr(0, header_end) != scan_header(cfg))
                throw invalid_input("scan: existing output has a different configuration header");
            // replay complete records; anything after the last '\n' is a torn
            // record from an interrupted run and gets truncated away
            std::size_t good_end = header_end + 1;
            std::size_t line_start = header_end + 1;
            for (;;) {
                std::size_t nl = content.find('\n', line_start);
                if (nl == std::string::npos) break;
                std::string line = content.substr(line_start, nl - line_start);
                if (!line.empty()) {
                    ResultRecord rec = parse_record(line);
                    outcome.summary.absorb(rec);
                    resume_after = enumeration.encode(rec.poly) + 1;
                    ++outcome.records_written;
                }
                good_end = nl + 1;
                line_start = nl + 1;
            }
            if (good_end != content.size()) {
                if (truncate(cfg.out_path.c_str(), static_cast<off_t>(good_end)) != 0)
                    throw invalid_input("scan: cannot truncate torn record in " + cfg.out_path);
            }
            file.open(cfg.out_path, std::ios::app);
        }
        if (!file.good()) throw invalid_input("scan: cannot open output path " + cfg.out_path);
        out = &file;
    } else if (out) {
        *out << scan_header(cfg) << "\n";
    }

    AnalyzeOptions aopts;
    aopts.primes = cfg.primes;
    aopts.f_max = cfg.f_max;
    aopts.tolerance = cfg.tolerance;
    aopts.seed = cfg.seed;

    struct ChunkResult {
        std::vector<std::string> lines;
        unsigned long candidates = 0;
        unsigned long reducible = 0;
        unsigned long unverified = 0;
        std::vector<ResultRecord> records;
    };

    const unsigned long chunk_size = 64;
    const unsigned long first_chunk = resume_after / chunk_size;
    const unsigned long n_chunks = (enumeration.total + chunk_size - 1) / chunk_size;

    std::mutex mu;
    std::condition_variable cv_produce, cv_consume;
    std::map<unsigned long, ChunkResult> ready;
    std::atomic<unsigned long> next_chunk{first_chunk};
    std::atomic<bool> stop{false};
    std::exception_ptr worker_error;
    unsigned long write_chunk = first_chunk;
    const unsigned long max_buffered = 4 * cfg.workers + 4;

    auto worker = [&]() {
        try {
            for (;;) {
                if (stop.load()) return;
                unsigned long id = next_chunk.fetch_add(1);
                if (id >= n_chunks) return;
                ChunkResult result;
                const unsigned long lo = std::max(id * chunk_size, resume_after);
                const unsigned long hi = std::min((id + 1) * chunk_size, enumeration.total);
                for (unsigned long idx = lo; idx < hi; ++idx) {
                    IntPoly f = enumeration.decode(idx);
                    if (sign(f.constant_term()) == 0) continue;
                    if (!f.is_primitive()) continue;
                    ++result.candidates;
                    BoundReport rep = analyze(f, aopts);
                    if (rep.cert.verdict == IrreducibilityCertificate::Verdict::unverified) {
                        ++result.unverified;
                        continue;
                    }
                    if (!rep.cert.certified_irreducible()) {
                        ++result.reducible;
                        continue;
                    }
                    ResultRecord rec = make_record(rep, cfg.emit_timings, 0);
                    result.lines.push_back(serialize_record(rec));
                    result.records.push_back(std::move(rec));
                }
                std::unique_lock<std::mutex> lk(mu);
                cv_produce.wait(lk, [&] { return id < write_chunk + max_buffered || stop.load(); });
                if (stop.load()) return;
                ready.emplace(id, std::move(result));
                cv_consume.notify_all();
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(mu);
            if (!worker_error) worker_error = std::current_exception();
            stop.store(true);
            cv_consume.notify_all();
            cv_produce.notify_all();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 0; i < cfg.workers; ++i) pool.emplace_back(worker);

    {
        std::unique_lock<std::mutex> lk(mu);
        while (write_chunk < n_chunks && !stop.load()) {
            cv_consume.wait(lk, [&] { return ready.count(write_chunk) > 0 || stop.load(); });
            if (ready.count(write_chunk) == 0) break; // stopped with nothing to drain
            ChunkResult chunk = std::move(ready.at(write_chunk));
            ready.erase(write_chunk);
            ++write_chunk;
            cv_produce.notify_all();
            lk.unlock();
            outcome.summary.candidates += chunk.candidates;
            outcome.summary.reducible_skipped += chunk.reducible;
            outcome.summary.unverified_skipped += chunk.unverified;
            for (std::size_t i = 0; i < chunk.lines.size(); ++i) {
                if (cfg.stop_after && outcome.records_written >= cfg.stop_after) {
                    outcome.stopped_early = true;
                    stop.store(true);
                    break;
                }
                if (out) *out << chunk.lines[i] << "\n";
                outcome.summary.absorb(chunk.records[i]);
                ++outcome.records_written;
            }
            lk.lock();
            if (stop.load()) break;
        }
        stop.store(true);
        cv_produce.notify_all();
        cv_consume.notify_all();
    }
    for (auto& t : pool) t.join();
    if (file.is_open()) file.close();
    if (worker_error) std::rethrow_exception(worker_error);
    return outcome;
}

} // namespace lehmer
