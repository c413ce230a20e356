#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "frob/quad_ring.hpp"

namespace frob {

// Raised by frobenius_index for inputs the test is not defined on
// (even numbers, n < 3, perfect squares).
struct not_applicable : std::domain_error {
    using std::domain_error::domain_error;
};

enum class Verdict { FrobeniusPrime, Composite, FactorFound };

enum class CompositeReason {
    None,
    Even,
    Square,
    FrobeniusEqualityFailed,
    FermatFailed,
    MrWitness,
};

struct TestDiagnostics {
    int64_t index;   // chosen c
    QuadElem base;   // standard base, reduced mod n
    QuadElem final;  // z^n mod n
};

struct TestOutcome {
    Verdict verdict;
    CompositeReason reason = CompositeReason::None;
    // FactorFound: a nontrivial divisor. Composite(Square): the root.
    std::optional<uint64_t> divisor;
    // present exactly when the Frobenius equality was evaluated
    std::optional<TestDiagnostics> diagnostics;
};

// Smallest c in [-1, 2, 3, 5, 7, ...] (primes after 2) with J(c/n) != +1.
// J(c/n) == 0 still returns c; the caller owns the resulting factor.
// The search is capped at c <= 1021 (far above the observed maximum for
// 64-bit inputs); exhausting the cap throws std::runtime_error.
int64_t frobenius_index(uint64_t n);

// (2, 1) for c in {-1, 2}; (1, 1) for c >= 3.
std::pair<uint64_t, uint64_t> standard_base(int64_t c);

// z^n == conj(z) in Z_n[sqrt(c)] for z = a + b*sqrt(c)?
bool raw_frobenius_relation(uint64_t n, uint64_t a, uint64_t b, int64_t c);

// The full test pipeline of the Frobenius primality test; total over all
// 64-bit inputs. Even n and n < 3 short-circuit (2 reports prime by
// convention), perfect squares are Composite with the root recorded, a zero
// Jacobi symbol at the index becomes FactorFound, and otherwise the verdict
// is the Frobenius equality at the standard base.
TestOutcome frobenius_test(uint64_t n);

// base^(n-1) == 1 mod n. gcd(base, n) > 1 throws trivial_factor_error.
bool fermat_test(uint64_t n, uint64_t base);

// Strong probable-prime round: n-1 = 2^s * d with d odd, base^d == +-1 or
// base^(2^r * d) == -1 for some r < s.
bool miller_rabin_round(uint64_t n, uint64_t base);

} // namespace frob
