#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "galrep/errors.hpp"

namespace galrep {

// Exact arbitrary-precision signed integer. Every integer quantity in the
// library (coefficients, discriminants, radicals, bounds) lives here.
using Int = mpz_class;

// Quadratic residue class of a residue mod an odd prime.
enum class SquareClass { Zero, Square, NonSquare };

// All primes <= limit, strictly increasing.
struct PrimeList {
    uint64_t limit = 0;
    std::vector<uint64_t> primes;

    bool contains(uint64_t p) const;
};

// --- modular helpers on machine words (p < 2^62) ---

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m);
uint64_t invmod(uint64_t a, uint64_t m); // a coprime to m

// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime_u64(uint64_t n);
// Miller-Rabin via GMP for arbitrary size (deterministic below 2^64,
// 40 rounds above).
bool is_prime(const Int& n);

// Prime factorization of |n|, n != 0: pairs (p, exponent), p increasing.
// Trial division by sieved primes, perfect-power reduction and Pollard-Brent
// rho for large cofactors.
std::vector<std::pair<Int, unsigned>> factorize(const Int& n);

// rad(n) = product of the distinct primes dividing |n|; radical(+-1) = 1.
// Throws DomainError for n = 0.
Int radical(const Int& n);

// The unique squarefree d with n = d*m^2, m > 0; sign(d) = sign(n).
// Throws DomainError for n = 0.
Int squarefree_part(const Int& n);

// Kronecker symbol (D|p) for prime p: Legendre symbol at odd p, standard
// Kronecker extension at p = 2. Throws DomainError if p is not prime.
int kronecker(const Int& D, const Int& p);

// All primes <= x (x >= 1). Segmented sieve above 10^7 keeps memory bounded.
PrimeList primes_up_to(uint64_t x);

// Euler-criterion square class of a mod ell (ell an odd prime, a reduced).
SquareClass square_class_mod(uint64_t a, uint64_t ell);

// Streams primes in increasing order without materializing a full list;
// used by scans whose upper end is data-dependent (witness searches,
// distinguishing-prime scans up to ~10^8).
class PrimeStream {
public:
    explicit PrimeStream(uint64_t start = 2);
    uint64_t next(); // returns the next prime >= current position

private:
    void refill();

    uint64_t segment_lo_;
    std::vector<uint64_t> segment_;
    size_t pos_ = 0;
    std::vector<uint64_t> base_; // primes up to sqrt of current segment end
};

} // namespace galrep
