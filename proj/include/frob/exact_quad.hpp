#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "frob/arith.hpp"

namespace frob {

// Exact quadratic integer a + b*sqrt(c) over Z; never reduced.
struct BigQuadInt {
    mpz_class a;
    mpz_class b;
    int64_t c;
};

// (a + b*sqrt(c))^q expanded exactly, by binary exponentiation.
BigQuadInt exact_pow(int64_t a, int64_t b, int64_t c, uint64_t q);

// D = gcd(a_q - a, b_q - b) when J(c/q) = +1, gcd(a_q - a, b_q + b) when
// J(c/q) = -1. Every prime p that could pair with cofactor q in a
// counterexample divides D. J(c/q) == 0 throws trivial_factor_error.
mpz_class cofactor_divisor_gcd(uint64_t q, int64_t a, int64_t b, int64_t c);

// z^n == conj(z) in Z_n[sqrt(c)] with arbitrary-precision n; the exact-route
// twin of raw_frobenius_relation, also used to cross-check it.
bool frobenius_relation_big(const mpz_class& n, const mpz_class& a, const mpz_class& b, int64_t c);

// Prime divisors of a cofactor gcd D, as far as 64-bit methods reach:
// trial division to 10^6, rho on a <= 64-bit remainder, and a probable-prime
// acceptance for larger remainders. Anything else is left unresolved.
struct DivisorFactors {
    std::vector<mpz_class> primes; // ascending, distinct
    bool unresolved = false;
    mpz_class unresolved_cofactor;
};

DivisorFactors factor_divisor(const mpz_class& d);

struct ExceptOneCandidate {
    mpz_class p;
    bool relation_holds = false; // z^n == conj(z) for n = q*p
    bool n_prime = false;        // primality of n (probable for n >= 2^64)
    bool skipped = false;
    std::string skip_reason;     // "even", "square", "beyond-bound"
};

struct ExceptOneRow {
    uint64_t q = 0;
    size_t d_bits = 0; // bit length of D
    std::vector<ExceptOneCandidate> candidates;
    bool unresolved = false; // part of D resisted factorization
    mpz_class unresolved_cofactor;
};

struct ExceptOneScan {
    int64_t c = 0;
    uint64_t q_max = 0;
    std::vector<ExceptOneRow> rows; // ascending q, rows with J(c/q) != 0 only
    // (q, p) pairs whose n = q*p satisfied the relation; expected to be
    // exactly the prime n among the candidates
    std::vector<std::pair<uint64_t, mpz_class>> passing;
    uint64_t composite_passing = 0; // counterexamples (expected 0)
};

// The "all factors except one" search at the standard base of c: for each odd
// q <= q_max with J(c/q) != 0, compute D, factor out every prime reachable
// with 64-bit methods, and test each candidate n = q*p for the Frobenius
// relation. n_bound, when given, restricts which candidates are tested.
ExceptOneScan factors_except_one_scan(int64_t c, uint64_t q_max,
                                      const std::optional<mpz_class>& n_bound = std::nullopt,
                                      int threads = 1);

std::string except_one_csv(const ExceptOneScan& scan);

} // namespace frob
