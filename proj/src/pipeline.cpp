#include "galrep/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "galrep/errors.hpp"
#include "galrep/isogeny.hpp"

namespace galrep {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string status_string(const CertifyOutcome& outcome) {
    return outcome.is_certified() ? "certified" : "unresolved";
}

ordered_json witness_json(const CertifyOutcome& o) {
    ordered_json w;
    auto put = [&](const char* key, const std::optional<uint64_t>& v) {
        if (v)
            w[key] = *v;
        else
            w[key] = nullptr;
    };
    put("borel", o.ledger.borel_out);
    put("split", o.ledger.split_norm_out);
    put("nonsplit", o.ledger.nonsplit_norm_out);
    put("exceptional", o.ledger.exceptional_out);
    w["det"] = o.ledger.det_witnesses;
    return w;
}

} // namespace

std::filesystem::path resolve_cache_dir(const RunConfig& config) {
    if (const char* env = std::getenv("SERRE_CACHE_DIR"); env && *env)
        return std::filesystem::path(env);
    if (!config.cache_dir.empty()) return config.cache_dir;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
        return std::filesystem::path(xdg) / "galrep" / "traces";
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "galrep" / "traces";
    return std::filesystem::path(".galrep-traces");
}

CertificationReport run_report(const std::string& curve_text, const RunConfig& config) {
    if (config.pmax_witness < 2)
        throw DomainError("run_report: pmax_witness must be >= 2");
    if (config.precision_bits < 128)
        throw DomainError("run_report: precision_bits must be >= 128 (ceilings are certified)");
    WeierstrassCurve curve = parse_curve(curve_text);
    CurveProfile profile = curve_profile(curve); // throws on singular input
    if (profile.cm)
        throw CmCurveError("run_report: curve " + curve_text
                           + " has complex multiplication (j = "
                           + profile.minimal_invariants.j.get_str()
                           + "); the bound applies only to non-CM curves");

    CertificationReport rep;
    rep.curve = curve;
    rep.delta_min = profile.minimal.disc_min;
    rep.conductor_radical = profile.conductor_radical;
    rep.cm = false;

    // argument of the bound is rad(2 N_E): the prime 2 enters exactly once
    Int rad2NE = radical(2 * profile.conductor_radical);
    rep.bound = serre_bound(rad2NE, config.precision_bits);

    TraceCache cache(resolve_cache_dir(config));
    MemoTraceTable table(profile, &cache);

    uint64_t bound_u = rep.bound.integer_bound.get_ui();
    for (uint64_t ell : primes_up_to(bound_u).primes) {
        // the fast path's hypothesis is ell > 37; below that always run Full
        CertifyMode mode = ell <= 37 ? CertifyMode::Full : config.mode;
        CertifyOutcome outcome = certify(profile, ell, config.pmax_witness, mode, table);
        if (!outcome.is_certified()) rep.unresolved.push_back(ell);
        rep.per_ell.push_back(std::move(outcome));
    }

    std::ostringstream conclusion;
    if (rep.unresolved.empty()) {
        conclusion << "conditional on GRH, the mod-ell representation is surjective for "
                      "every prime ell (all ell <= " << rep.bound.integer_bound
                   << " certified from trace data; larger ell covered by the bound)";
    } else {
        conclusion << "conditional on GRH, the mod-ell representation is surjective for "
                      "every prime ell > " << rep.bound.integer_bound
                   << " and for every certified ell below it; unresolved:";
        for (uint64_t ell : rep.unresolved) conclusion << " " << ell;
    }
    rep.grh_conclusion = conclusion.str();
    return rep;
}

std::string report_to_json(const CertificationReport& rep) {
    ordered_json j;
    j["curve"] = format_curve(rep.curve);
    j["delta_min"] = rep.delta_min.get_str();
    j["conductor_radical"] = rep.conductor_radical.get_str();
    j["cm"] = rep.cm;
    j["bound"] = ordered_json{{"raw", rep.bound.raw_value},
                              {"integer", rep.bound.integer_bound.get_si()},
                              {"formula", formula_name(rep.bound.formula_id)}};
    ordered_json primes = ordered_json::array();
    for (const auto& o : rep.per_ell) {
        ordered_json entry;
        entry["ell"] = o.ell;
        entry["status"] = status_string(o);
        entry["witnesses"] = witness_json(o);
        entry["pmax"] = o.pmax;
        primes.push_back(std::move(entry));
    }
    j["primes"] = std::move(primes);
    j["summary"] = ordered_json{{"unresolved", rep.unresolved},
                                {"grh_conclusion", rep.grh_conclusion}};
    return j.dump(2) + "\n";
}

std::string report_to_text(const CertificationReport& rep) {
    std::ostringstream os;
    os << "curve: " << format_curve(rep.curve) << "\n"
       << "minimal discriminant: " << rep.delta_min << "\n"
       << "conductor radical: " << rep.conductor_radical << "\n"
       << "cm: " << (rep.cm ? "yes" : "no") << "\n"
       << "bound (" << formula_name(rep.bound.formula_id) << "): " << rep.bound.integer_bound
       << "  [raw " << rep.bound.raw_decimal << "]\n";
    size_t certified = 0;
    for (const auto& o : rep.per_ell)
        if (o.is_certified()) ++certified;
    os << "primes up to bound: " << rep.per_ell.size() << ", certified: " << certified << "\n";
    if (!rep.unresolved.empty()) {
        os << "unresolved:";
        for (uint64_t ell : rep.unresolved) os << " " << ell;
        os << "\n";
    }
    os << rep.grh_conclusion << "\n";
    return os.str();
}

std::vector<TraceRecord> cache_roundtrip(const CurveProfile& profile,
                                         const std::vector<TraceRecord>& records,
                                         TraceCache& cache) {
    cache.store(profile, records);
    return cache.load(profile);
}

// --- CLI ---------------------------------------------------------------------

namespace {

struct CliCommon {
    std::string curve_text;
    std::string cache_dir;
    uint64_t pmax = 100000;
    std::string mode = "full";
    std::string json_path;
};

RunConfig config_from(const CliCommon& c) {
    RunConfig cfg;
    cfg.pmax_witness = c.pmax;
    cfg.mode = c.mode == "smbpr" ? CertifyMode::Smbpr : CertifyMode::Full;
    if (!c.cache_dir.empty()) cfg.cache_dir = c.cache_dir;
    return cfg;
}

void emit_report(const CertificationReport& rep, const std::string& json_path) {
    if (json_path == "-") {
        std::cout << report_to_json(rep);
        return;
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot write JSON report to " + json_path);
        out << report_to_json(rep);
    }
    std::cout << report_to_text(rep);
}

ordered_json outcome_json(const CertifyOutcome& o) {
    ordered_json entry;
    entry["ell"] = o.ell;
    entry["status"] = status_string(o);
    entry["witnesses"] = witness_json(o);
    entry["pmax"] = o.pmax;
    if (!o.missing.empty()) entry["missing"] = o.missing;
    return entry;
}

} // namespace

int cmd_dispatch(int argc, const char* const* argv) {
    CLI::App app{"mod-ell Galois image certification for elliptic curves over Q"};
    app.require_subcommand(1);

    CliCommon c;

    auto add_curve = [&](CLI::App* sub) {
        sub->add_option("--curve", c.curve_text, "curve a1,a2,a3,a4,a6")->required();
    };
    auto add_cache = [&](CLI::App* sub) {
        sub->add_option("--cache-dir", c.cache_dir, "trace cache directory");
    };

    auto* cmd_bound = app.add_subcommand("bound", "conditional largest-nonsurjective-prime bound");
    add_curve(cmd_bound);

    auto* cmd_certify = app.add_subcommand(
        "certify", "certify mod-ell surjectivity (all ell up to the bound, or one --ell)");
    add_curve(cmd_certify);
    add_cache(cmd_certify);
    uint64_t one_ell = 0;
    cmd_certify->add_option("--ell", one_ell, "certify this prime only");
    cmd_certify->add_option("--pmax", c.pmax, "witness search limit (default 100000)");
    cmd_certify->add_option("--mode", c.mode, "full | smbpr")
        ->check(CLI::IsMember({"full", "smbpr"}));
    cmd_certify->add_option("--json", c.json_path, "write JSON report here ('-' = stdout)");

    auto* cmd_ap = app.add_subcommand("ap", "Frobenius trace at a good prime");
    add_curve(cmd_ap);
    add_cache(cmd_ap);
    uint64_t p_arg = 0;
    cmd_ap->add_option("--p", p_arg, "prime of good reduction")->required();
    std::string strategy = "auto";
    cmd_ap->add_option("--strategy", strategy, "auto | naive | bsgs")
        ->check(CLI::IsMember({"auto", "naive", "bsgs"}));

    auto* cmd_twist = app.add_subcommand("twist", "quadratic twist by squarefree D");
    add_curve(cmd_twist);
    std::string d_text;
    cmd_twist->add_option("--d", d_text, "squarefree nonzero integer")->required();

    auto* cmd_dist = app.add_subcommand("distinguish",
                                        "least prime with differing traces for two curves");
    add_curve(cmd_dist);
    add_cache(cmd_dist);
    std::string curve2_text;
    cmd_dist->add_option("--curve2", curve2_text, "second curve a1,a2,a3,a4,a6")->required();
    auto* dist_pmax = cmd_dist->add_option(
        "--pmax", c.pmax, "scan limit (default: conditional bound, clamped to 1e8)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_bound->parsed()) {
            CurveProfile prof = curve_profile(parse_curve(c.curve_text));
            BoundReport rep = serre_bound(radical(2 * prof.conductor_radical));
            std::cout << rep.integer_bound << "\n";
            return 0;
        }
        if (cmd_certify->parsed()) {
            RunConfig cfg = config_from(c);
            if (one_ell != 0) {
                CurveProfile prof = curve_profile(parse_curve(c.curve_text));
                TraceCache cache(resolve_cache_dir(cfg));
                CertifyMode mode = one_ell <= 37 ? CertifyMode::Full : cfg.mode;
                CertifyOutcome o = certify(prof, one_ell, cfg.pmax_witness, mode, &cache);
                std::cout << outcome_json(o).dump(2) << "\n";
                return 0;
            }
            emit_report(run_report(c.curve_text, cfg), c.json_path);
            return 0;
        }
        if (cmd_ap->parsed()) {
            RunConfig cfg = config_from(c);
            CurveProfile prof = curve_profile(parse_curve(c.curve_text));
            ApOptions opts;
            if (strategy == "naive") opts.strategy = ApStrategy::Naive;
            if (strategy == "bsgs") opts.strategy = ApStrategy::Bsgs;
            TraceCache cache(resolve_cache_dir(cfg));
            std::vector<TraceRecord> known = cache.load(prof);
            auto hit = std::find_if(known.begin(), known.end(),
                                    [&](const TraceRecord& r) { return r.p == p_arg; });
            int64_t t;
            if (hit != known.end() && opts.strategy == ApStrategy::Auto) {
                if (!good_reduction(prof, p_arg))
                    throw DomainError("ap: bad reduction at p = " + std::to_string(p_arg));
                t = hit->ap;
            } else {
                t = ap(prof, p_arg, opts);
                if (hit == known.end() && good_reduction(prof, p_arg)) {
                    known.insert(std::upper_bound(known.begin(), known.end(), p_arg,
                                                  [](uint64_t p, const TraceRecord& r) {
                                                      return p < r.p;
                                                  }),
                                 TraceRecord{p_arg, t});
                    cache.store(prof, known);
                }
            }
            std::cout << t << "\n";
            return 0;
        }
        if (cmd_twist->parsed()) {
            Int d(d_text);
            std::cout << format_curve(quadratic_twist(parse_curve(c.curve_text), d)) << "\n";
            return 0;
        }
        if (cmd_dist->parsed()) {
            RunConfig cfg = config_from(c);
            CurveProfile prof1 = curve_profile(parse_curve(c.curve_text));
            CurveProfile prof2 = curve_profile(parse_curve(curve2_text));
            TraceCache cache(resolve_cache_dir(cfg));
            uint64_t pcap = dist_pmax->count() ? c.pmax
                                               : default_distinguish_cap(prof1, prof2);
            auto res = distinguishing_prime(prof1, prof2, pcap, &cache, ApOptions{}, &std::cerr);
            if (!res) {
                std::cout << "no distinguishing prime <= " << pcap << "\n";
                return 0;
            }
            std::cout << "p=" << res->p << " ap1=" << res->ap1 << " ap2=" << res->ap2
                      << " bound=" << res->bound.integer_bound
                      << " within_bound=" << (res->within_bound ? "yes" : "no") << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) { // bad Int(text) construction
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IndeterminateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CacheError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace galrep
