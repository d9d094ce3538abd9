#include "galrep/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "galrep/errors.hpp"

namespace galrep {

namespace {

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

uint64_t mod_u64(const Int& x, uint64_t p) {
    return mpz_fdiv_ui(x.get_mpz_t(), p);
}

// --- naive counting -------------------------------------------------------

int64_t ap_naive_p2(const WeierstrassCurve& e) {
    uint64_t a1 = mod_u64(e.a1, 2), a2 = mod_u64(e.a2, 2), a3 = mod_u64(e.a3, 2),
             a4 = mod_u64(e.a4, 2), a6 = mod_u64(e.a6, 2);
    int n = 1; // point at infinity
    for (uint64_t x = 0; x < 2; ++x)
        for (uint64_t y = 0; y < 2; ++y) {
            uint64_t lhs = (y * y + a1 * x * y + a3 * y) % 2;
            uint64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
            if (lhs == rhs) ++n;
        }
    return 3 - n;
}

// a_p = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6) for odd p; the cubic values
// advance by third finite differences, so the loop is adds and table reads.
int64_t ap_naive_odd(const CurveInvariants& inv, uint64_t p) {
    std::vector<int8_t> chi(p, -1);
    chi[0] = 0;
    for (uint64_t i = 1; i <= (p - 1) / 2; ++i) chi[(i * i) % p] = 1;

    uint64_t b2 = mod_u64(inv.b2, p), b4 = mod_u64(inv.b4, p), b6 = mod_u64(inv.b6, p);
    uint64_t f = b6;
    uint64_t d1 = (4 + b2 + 2 * b4) % p;
    uint64_t d2 = (24 + 2 * b2) % p;
    const uint64_t d3 = 24 % p;
    int64_t sum = 0;
    for (uint64_t x = 0; x < p; ++x) {
        sum += chi[f];
        f += d1;
        if (f >= p) f -= p;
        d1 += d2;
        if (d1 >= p) d1 -= p;
        d2 += d3;
        if (d2 >= p) d2 -= p;
    }
    return -sum;
}

// --- BSGS order finding ---------------------------------------------------

struct Pt {
    uint64_t x = 0, y = 0;
    bool inf = true;
};

struct EcFp {
    uint64_t p, A, B;

    Pt add(const Pt& P, const Pt& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0) return Pt{}; // vertical
            return dbl(P);
        }
        uint64_t num = Q.y >= P.y ? Q.y - P.y : Q.y + p - P.y;
        uint64_t den = Q.x >= P.x ? Q.x - P.x : Q.x + p - P.x;
        uint64_t lam = mulmod(num, invmod(den, p), p);
        return chord(P, Q, lam);
    }

    Pt dbl(const Pt& P) const {
        if (P.inf || P.y == 0) return Pt{};
        uint64_t num = (mulmod(mulmod(P.x, P.x, p), 3, p) + A) % p;
        uint64_t lam = mulmod(num, invmod(2 * P.y % p, p), p);
        return chord(P, P, lam);
    }

    Pt mul(Pt P, uint64_t k) const {
        Pt R;
        while (k) {
            if (k & 1) R = add(R, P);
            P = dbl(P);
            k >>= 1;
        }
        return R;
    }

    Pt neg(const Pt& P) const {
        if (P.inf) return P;
        return Pt{P.x, P.y == 0 ? 0 : p - P.y, false};
    }

private:
    Pt chord(const Pt& P, const Pt& Q, uint64_t lam) const {
        uint64_t x3 = mulmod(lam, lam, p);
        x3 = (x3 + 2 * p - P.x - Q.x) % p;
        uint64_t y3 = mulmod(lam, (P.x + p - x3) % p, p);
        y3 = (y3 + p - P.y) % p;
        return Pt{x3, y3, false};
    }
};

// Tonelli-Shanks; a must be a nonzero square mod odd prime p.
uint64_t sqrt_mod(uint64_t a, uint64_t p) {
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    uint64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        uint64_t i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        uint64_t b = powmod(c, uint64_t(1) << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

struct SplitMix {
    uint64_t s;
    uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

// All verified m in [m0, m0 + span) with m*P = O, via baby-step/giant-step.
std::vector<uint64_t> multiples_in_window(const EcFp& ec, const Pt& P, uint64_t m0,
                                          uint64_t span) {
    uint64_t s = isqrt_u64(span) + 1;
    std::unordered_map<uint64_t, std::vector<uint32_t>> baby;
    baby.reserve(s * 2);
    std::vector<Pt> babies(s);
    Pt cur; // O
    for (uint64_t j = 0; j < s; ++j) {
        babies[j] = cur;
        if (!cur.inf) baby[cur.x].push_back(static_cast<uint32_t>(j));
        cur = ec.add(cur, P);
    }
    Pt S = ec.mul(P, s);
    Pt R = ec.mul(P, m0);
    std::vector<uint64_t> found;
    auto consider = [&](uint64_t m) {
        if (m < m0 || m >= m0 + span) return;
        if (!ec.mul(P, m).inf) return;
        if (std::find(found.begin(), found.end(), m) == found.end()) found.push_back(m);
    };
    for (uint64_t k = 0; k * s < span + s; ++k) {
        if (R.inf) {
            consider(m0 + k * s);
        } else {
            auto it = baby.find(R.x);
            if (it != baby.end())
                for (uint32_t j : it->second) {
                    const Pt& bj = babies[j];
                    if (R.y == bj.y) consider(m0 + k * s - j);
                    if (R.y == (bj.y == 0 ? 0 : ec.p - bj.y)) consider(m0 + k * s + j);
                }
        }
        R = ec.add(R, S);
    }
    std::sort(found.begin(), found.end());
    return found;
}

uint64_t exact_order(const EcFp& ec, const Pt& P, uint64_t multiple) {
    uint64_t ord = multiple;
    for (const auto& [pf, e] : factorize(Int(multiple))) {
        uint64_t q = pf.get_ui();
        while (ord % q == 0 && ec.mul(P, ord / q).inf) ord /= q;
    }
    return ord;
}

int64_t ap_bsgs(const CurveProfile& profile, uint64_t p, const ApOptions& opts,
                bool* resolved) {
    const CurveInvariants& inv = profile.minimal_invariants;
    // short model y^2 = x^3 - 27 c4 x - 54 c6, isomorphic for p >= 5
    uint64_t c4 = mod_u64(inv.c4, p), c6 = mod_u64(inv.c6, p);
    EcFp ec{p, mulmod(p - 27 % p, c4, p), mulmod(p - 54 % p, c6, p)};

    const uint64_t h = isqrt_u64(4 * p); // floor(2 sqrt p)
    const uint64_t lo = p + 1 - h, span = 2 * h + 1;

    SplitMix rng{p ^ (c4 << 32) ^ c6 ^ 0xa076'1d64'78bd'642full};
    uint64_t lcm_orders = 1;
    int points_used = 0;
    int draws = 0;
    while (points_used < opts.bsgs_random_points && draws < 50 * opts.bsgs_random_points) {
        ++draws;
        uint64_t x = rng.next() % p;
        uint64_t rhs = (mulmod(mulmod(x, x, p), x, p) + mulmod(ec.A, x, p) + ec.B) % p;
        Pt P;
        if (rhs == 0) {
            P = Pt{x, 0, false};
        } else if (powmod(rhs, (p - 1) / 2, p) == 1) {
            P = Pt{x, sqrt_mod(rhs, p), false};
        } else {
            continue;
        }
        ++points_used;
        auto ms = multiples_in_window(ec, P, lo, span);
        if (ms.empty()) continue; // cannot happen for a genuine group point
        uint64_t ord = exact_order(ec, P, ms.front());
        lcm_orders = std::lcm(lcm_orders, ord);
        uint64_t first = ((lo + lcm_orders - 1) / lcm_orders) * lcm_orders;
        if (first + lcm_orders > lo + span - 1) {
            *resolved = true;
            return static_cast<int64_t>(p + 1) - static_cast<int64_t>(first);
        }
    }
    *resolved = false;
    return 0;
}

} // namespace

bool good_reduction(const CurveProfile& profile, uint64_t p) {
    return !mpz_divisible_ui_p(profile.minimal.disc_min.get_mpz_t(), p);
}

int64_t ap(const CurveProfile& profile, uint64_t p, const ApOptions& opts) {
    if (!is_prime_u64(p)) throw DomainError("ap: p is not prime");
    if (!good_reduction(profile, p))
        throw DomainError("ap: bad reduction at p = " + std::to_string(p));

    int64_t t;
    ApStrategy strat = opts.strategy;
    if (p < 5) strat = ApStrategy::Naive; // short model needs p >= 5
    if (strat == ApStrategy::Auto)
        strat = p < opts.naive_threshold ? ApStrategy::Naive : ApStrategy::Bsgs;

    if (strat == ApStrategy::Naive) {
        if (p > opts.naive_fallback_cap)
            throw DomainError("ap: p exceeds the naive strategy cap");
        t = p == 2 ? ap_naive_p2(profile.minimal.curve)
                   : ap_naive_odd(profile.minimal_invariants, p);
    } else {
        bool resolved = false;
        t = ap_bsgs(profile, p, opts, &resolved);
        if (!resolved) {
            if (p < opts.naive_fallback_cap) {
                t = ap_naive_odd(profile.minimal_invariants, p);
            } else {
                throw IndeterminateError("ap: BSGS could not pin the group order at p = "
                                         + std::to_string(p));
            }
        }
    }

    if (static_cast<__int128>(t) * t > 4 * static_cast<__int128>(p))
        throw std::logic_error("ap: Hasse bound violated (internal error)");
    return t;
}

// --- cache ------------------------------------------------------------------

namespace {

uint64_t fnv1a(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

TraceCache::TraceCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string TraceCache::digest_hex(const WeierstrassCurve& minimal_curve) {
    return hex64(fnv1a(format_curve(minimal_curve)));
}

std::filesystem::path TraceCache::path_for(const CurveProfile& profile) const {
    return dir_ / digest_hex(profile.minimal.curve);
}

std::vector<TraceRecord> TraceCache::load(const CurveProfile& profile) const {
    std::ifstream in(path_for(profile), std::ios::binary);
    if (!in) return {};
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();

    auto discard = [&](const char* why) -> std::vector<TraceRecord> {
        std::cerr << "warning: trace cache " << path_for(profile).string() << " " << why
                  << "; discarding\n";
        return {};
    };

    size_t mark = content.rfind("checksum ");
    if (mark == std::string::npos || (mark != 0 && content[mark - 1] != '\n'))
        return discard("has no checksum line");
    std::string body = content.substr(0, mark);
    std::string tail = content.substr(mark);
    std::istringstream tail_ss(tail);
    std::string kw, hexv;
    tail_ss >> kw >> hexv;
    if (hexv != hex64(fnv1a(body))) return discard("failed checksum");

    std::istringstream ss(body);
    std::string header;
    if (!std::getline(ss, header) || header != "curve " + format_curve(profile.minimal.curve))
        return discard("has a mismatched header");
    std::vector<TraceRecord> out;
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        uint64_t p;
        int64_t a;
        if (!(ls >> p >> a)) return discard("has a malformed record");
        if (!out.empty() && p <= out.back().p) return discard("is not increasing in p");
        if (static_cast<__int128>(a) * a > 4 * static_cast<__int128>(p))
            return discard("violates the Hasse bound");
        out.push_back(TraceRecord{p, a});
    }
    return out;
}

void TraceCache::store(const CurveProfile& profile, const std::vector<TraceRecord>& records) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::ostringstream body;
    body << "curve " << format_curve(profile.minimal.curve) << "\n";
    for (const auto& r : records) body << r.p << "\t" << r.ap << "\n";
    std::string text = body.str();
    text += "checksum " + hex64(fnv1a(text)) + "\n";

    auto final_path = path_for(profile);
    auto tmp_path = final_path;
    tmp_path += ".tmp";
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot write trace cache file " + tmp_path.string());
        out << text;
        if (!out) throw CacheError("short write to trace cache file " + tmp_path.string());
    }
    std::filesystem::rename(tmp_path, final_path, ec);
    if (ec) throw CacheError("cannot move trace cache file into place: " + final_path.string()
                             + ": " + ec.message());
}

std::vector<TraceRecord> batch_traces(const CurveProfile& profile, uint64_t pmax,
                                      TraceCache* cache, const ApOptions& opts) {
    if (pmax < 2) return {};
    std::vector<TraceRecord> known = cache ? cache->load(profile) : std::vector<TraceRecord>{};
    std::vector<TraceRecord> out;
    size_t ki = 0;
    bool fresh = false;
    for (uint64_t p : primes_up_to(pmax).primes) {
        while (ki < known.size() && known[ki].p < p) ++ki;
        if (!good_reduction(profile, p)) continue;
        if (ki < known.size() && known[ki].p == p) {
            out.push_back(known[ki]);
        } else {
            out.push_back(TraceRecord{p, ap(profile, p, opts)});
            fresh = true;
        }
    }
    if (cache && fresh) {
        std::vector<TraceRecord> merged;
        std::merge(known.begin(), known.end(), out.begin(), out.end(),
                   std::back_inserter(merged),
                   [](const TraceRecord& a, const TraceRecord& b) { return a.p < b.p; });
        merged.erase(std::unique(merged.begin(), merged.end(),
                                 [](const TraceRecord& a, const TraceRecord& b) {
                                     return a.p == b.p;
                                 }),
                     merged.end());
        cache->store(profile, merged);
    }
    return out;
}

TraceSource::TraceSource(const CurveProfile& profile, TraceCache* cache, const ApOptions& opts)
    : profile_(profile), cache_(cache), opts_(opts), stream_(2) {
    if (cache_) cached_ = cache_->load(profile_);
}

TraceSource::~TraceSource() {
    if (!cache_ || fresh_.empty()) return;
    std::vector<TraceRecord> merged;
    std::merge(cached_.begin(), cached_.end(), fresh_.begin(), fresh_.end(),
               std::back_inserter(merged),
               [](const TraceRecord& a, const TraceRecord& b) { return a.p < b.p; });
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](const TraceRecord& a, const TraceRecord& b) {
                                 return a.p == b.p;
                             }),
                 merged.end());
    try {
        cache_->store(profile_, merged);
    } catch (const CacheError&) {
        // cache is an accelerator; losing a flush must not fail the computation
    }
}

std::optional<TraceRecord> TraceSource::next(uint64_t pmax) {
    while (true) {
        uint64_t p = pending_ ? pending_ : stream_.next();
        pending_ = 0;
        if (p > pmax) {
            pending_ = p;
            return std::nullopt;
        }
        if (!good_reduction(profile_, p)) continue;
        while (cached_pos_ < cached_.size() && cached_[cached_pos_].p < p) ++cached_pos_;
        if (cached_pos_ < cached_.size() && cached_[cached_pos_].p == p)
            return cached_[cached_pos_++];
        TraceRecord rec{p, ap(profile_, p, opts_)};
        fresh_.push_back(rec);
        return rec;
    }
}

} // namespace galrep
