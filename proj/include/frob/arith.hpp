#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace frob {

// Thrown when an operation stumbles over a nontrivial divisor of its input
// (shared gcd in a Fermat base, radicand dividing the modulus, norm divisible
// by the prime under test, ...).
struct trivial_factor_error : std::runtime_error {
    uint64_t divisor;
    explicit trivial_factor_error(uint64_t d, const char* what = "trivial factor found")
        : std::runtime_error(what), divisor(d) {}
};

struct no_square_root : std::domain_error {
    using std::domain_error::domain_error;
};

// Complete prime factorization of a 64-bit value.
// Invariants: primes strictly increasing, exponents >= 1, product == value.
struct Factorization {
    uint64_t value = 0;
    std::vector<std::pair<uint64_t, int>> factors;

    uint64_t reconstruct() const;
};

// (a*b) mod n, exact for all n < 2^64. Throws std::invalid_argument for n < 2.
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t n);

// a^e mod n by square-and-multiply; e == 0 gives 1 mod n.
// Throws std::invalid_argument for n < 2.
uint64_t powmod(uint64_t a, uint64_t e, uint64_t n);

// Jacobi symbol J(a/n) for odd n >= 1; a may be negative. J(a/1) = 1.
// Throws std::invalid_argument when n is even or zero.
int jacobi(int64_t a, uint64_t n);

// Same, for a already reduced to [0, 2^64).
int jacobi_unsigned(uint64_t a, uint64_t n);

// Integer root r with r*r == n, when one exists.
std::optional<uint64_t> is_perfect_square(uint64_t n);

// Square root of c modulo an odd prime p, canonicalized to min(d, p-d).
// Requires J(c/p) = +1; otherwise throws no_square_root.
uint64_t sqrt_mod_prime(uint64_t c, uint64_t p);

// Deterministic for all 64-bit inputs (Miller-Rabin over the 12 smallest
// primes, a witness set proven deterministic below 2^64).
bool is_prime(uint64_t n);

// Trial division by small primes, then Brent's cycle method with a
// deterministic polynomial-increment sequence. Terminates for all n >= 2.
Factorization factorize(uint64_t n);

// Least t >= 1 with a^t == 1 mod p; group_order must be factorize(p-1).
// Throws std::invalid_argument when a == 0 mod p or group_order mismatches.
uint64_t multiplicative_order(uint64_t a, uint64_t p, const Factorization& group_order);

namespace detail {
// Primes below 1024, ascending. Shared by trial division and index search.
const std::vector<uint64_t>& small_primes();
} // namespace detail

} // namespace frob
