#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "galrep/bounds.hpp"
#include "galrep/curve.hpp"
#include "galrep/galois_image.hpp"
#include "galrep/reduction.hpp"

namespace galrep {

enum class OutputFormat { Text, Json };

struct RunConfig {
    uint64_t pmax_witness = 100000;
    CertifyMode mode = CertifyMode::Full;
    std::filesystem::path cache_dir; // empty = default (SERRE_CACHE_DIR wins either way)
    mpfr_prec_t precision_bits = 128;
    OutputFormat output = OutputFormat::Text;
};

// Full per-curve verdict: the conditional bound and the status of every
// prime up to it.
struct CertificationReport {
    WeierstrassCurve curve;
    Int delta_min;
    Int conductor_radical;
    bool cm = false;
    BoundReport bound;
    std::vector<CertifyOutcome> per_ell; // one entry per prime <= bound
    std::vector<uint64_t> unresolved;    // primes not certified
    std::string grh_conclusion;
};

// Parse, profile, bound, certify every prime up to the bound. Refuses CM
// curves and singular models with typed errors.
CertificationReport run_report(const std::string& curve_text, const RunConfig& config);

// Stable-key JSON rendering (byte-identical for identical inputs + config).
std::string report_to_json(const CertificationReport& report);
std::string report_to_text(const CertificationReport& report);

// Resolves the trace-cache directory: SERRE_CACHE_DIR, then the configured
// path, then a per-user cache directory.
std::filesystem::path resolve_cache_dir(const RunConfig& config);

// Store-then-load through the cache; exercised by the corruption tests.
std::vector<TraceRecord> cache_roundtrip(const CurveProfile& profile,
                                         const std::vector<TraceRecord>& records,
                                         TraceCache& cache);

// CLI entry: subcommands bound / certify / ap / twist / distinguish.
// Exit codes: 0 success, 1 domain error, 2 usage error.
int cmd_dispatch(int argc, const char* const* argv);

} // namespace galrep
