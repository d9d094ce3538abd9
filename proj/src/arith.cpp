#include "galrep/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace galrep {

namespace {

constexpr uint64_t kSegmentSpan = 1u << 20; // sieve window, odd numbers only
constexpr uint64_t kPlainSieveCap = 10'000'000; // below this, one flat sieve

// Simple sieve of Eratosthenes over [2, limit].
std::vector<uint64_t> flat_sieve(uint64_t limit) {
    std::vector<uint64_t> out;
    if (limit < 2) return out;
    std::vector<uint8_t> composite(limit + 1, 0);
    for (uint64_t i = 2; i * i <= limit; ++i)
        if (!composite[i])
            for (uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    for (uint64_t i = 2; i <= limit; ++i)
        if (!composite[i]) out.push_back(i);
    return out;
}

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Sieve the odd numbers of [lo, hi] against base primes, append primes found.
void sieve_segment(uint64_t lo, uint64_t hi, const std::vector<uint64_t>& base,
                   std::vector<uint64_t>& out) {
    if (lo <= 2 && hi >= 2) out.push_back(2);
    if (lo % 2 == 0) ++lo;
    if (lo > hi) return;
    const size_t n = static_cast<size_t>((hi - lo) / 2 + 1); // odds in [lo,hi]
    std::vector<uint8_t> composite(n, 0);
    if (lo == 1) composite[0] = 1;
    for (uint64_t p : base) {
        if (p == 2) continue;
        if (p * p > hi) break;
        uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
        if (start % 2 == 0) start += p;
        for (uint64_t j = start; j <= hi; j += 2 * p)
            composite[(j - lo) / 2] = 1;
    }
    for (size_t i = 0; i < n; ++i)
        if (!composite[i]) out.push_back(lo + 2 * i);
}

} // namespace

bool PrimeList::contains(uint64_t p) const {
    return std::binary_search(primes.begin(), primes.end(), p);
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t m) {
    // extended Euclid; caller guarantees gcd(a, m) = 1
    int64_t t = 0, newt = 1;
    int64_t r = static_cast<int64_t>(m), newr = static_cast<int64_t>(a % m);
    while (newr != 0) {
        int64_t q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // deterministic witness set for n < 2^64
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

bool is_prime(const Int& n) {
    if (n <= 0) return false;
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

// Pollard-Brent rho; returns a nontrivial factor of composite odd n.
Int pollard_brent(const Int& n, unsigned long seed) {
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(seed);
    while (true) {
        Int y = rng.get_z_range(n - 3) + 2;
        Int c = rng.get_z_range(n - 1) + 1;
        Int x = y, ys = y, d = 1, q = 1;
        unsigned long r = 1;
        const unsigned long m = 128;
        while (d == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
            unsigned long k = 0;
            while (k < r && d == 1) {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (d == n) {
            // backtrack one step at a time
            do {
                ys = (ys * ys + c) % n;
                Int diff = abs(x - ys);
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (d == 1);
        }
        if (d != n) return d;
        ++seed; // rare: retry with fresh parameters
    }
}

void factor_into(Int n, std::vector<std::pair<Int, unsigned>>& acc) {
    if (n == 1) return;
    if (is_prime(n)) {
        acc.emplace_back(n, 1);
        return;
    }
    // perfect power first: rho degenerates on p^k with small p
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
            Int root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                std::vector<std::pair<Int, unsigned>> sub;
                factor_into(root, sub);
                for (auto& [p, e] : sub) acc.emplace_back(p, e * static_cast<unsigned>(k));
                return;
            }
        }
    }
    Int d = pollard_brent(n, 0xb5297a4d);
    factor_into(d, acc);
    factor_into(n / d, acc);
}

} // namespace

std::vector<std::pair<Int, unsigned>> factorize(const Int& n) {
    if (n == 0) throw DomainError("factorize: n = 0");
    Int m = abs(n);
    std::vector<std::pair<Int, unsigned>> out;
    if (m == 1) return out;

    static const std::vector<uint64_t> small = flat_sieve(100'000);
    for (uint64_t p : small) {
        if (Int(p) * p > m) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            unsigned e = 0;
            do {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
            out.emplace_back(Int(p), e);
        }
        if (m == 1) break;
    }
    if (m > 1) {
        std::vector<std::pair<Int, unsigned>> rest;
        factor_into(m, rest);
        // merge repeated primes from recursive splits
        std::sort(rest.begin(), rest.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [p, e] : rest) {
            if (!out.empty() && out.back().first == p)
                out.back().second += e;
            else
                out.emplace_back(p, e);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

Int radical(const Int& n) {
    if (n == 0) throw DomainError("radical: n = 0");
    Int r = 1;
    for (const auto& [p, e] : factorize(n)) r *= p;
    return r;
}

Int squarefree_part(const Int& n) {
    if (n == 0) throw DomainError("squarefree_part: n = 0");
    Int d = 1;
    for (const auto& [p, e] : factorize(n))
        if (e % 2 == 1) d *= p;
    return n < 0 ? Int(-d) : d;
}

int kronecker(const Int& D, const Int& p) {
    if (!is_prime(p)) throw DomainError("kronecker: p is not prime");
    return mpz_kronecker(D.get_mpz_t(), p.get_mpz_t());
}

PrimeList primes_up_to(uint64_t x) {
    PrimeList out;
    out.limit = x;
    if (x < 2) return out;
    if (x <= kPlainSieveCap) {
        out.primes = flat_sieve(x);
        return out;
    }
    const uint64_t root = isqrt_u64(x);
    std::vector<uint64_t> base = flat_sieve(root);
    out.primes = base;
    uint64_t lo = root + 1;
    while (lo <= x) {
        uint64_t hi = std::min(x, lo + 2 * kSegmentSpan - 1);
        sieve_segment(lo, hi, base, out.primes);
        lo = hi + 1;
    }
    return out;
}

SquareClass square_class_mod(uint64_t a, uint64_t ell) {
    if (ell < 3 || !is_prime_u64(ell))
        throw DomainError("square_class_mod: modulus must be an odd prime");
    a %= ell;
    if (a == 0) return SquareClass::Zero;
    return powmod(a, (ell - 1) / 2, ell) == 1 ? SquareClass::Square
                                              : SquareClass::NonSquare;
}

PrimeStream::PrimeStream(uint64_t start) : segment_lo_(std::max<uint64_t>(start, 2)) {
    refill();
}

uint64_t PrimeStream::next() {
    while (pos_ >= segment_.size()) refill();
    return segment_[pos_++];
}

void PrimeStream::refill() {
    if (!segment_.empty()) segment_lo_ = segment_.back() + 1;
    segment_.clear();
    pos_ = 0;
    while (segment_.empty()) {
        uint64_t hi = segment_lo_ + 2 * kSegmentSpan - 1;
        uint64_t root = isqrt_u64(hi);
        if (base_.empty() || base_.back() < root) base_ = flat_sieve(root);
        sieve_segment(segment_lo_, hi, base_, segment_);
        segment_lo_ = hi + 1;
    }
}

} // namespace galrep
