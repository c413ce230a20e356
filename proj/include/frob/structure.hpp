#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "frob/arith.hpp"
#include "frob/quad_ring.hpp"

namespace frob {

// Both halves of the multiple-factor test at the standard base: the full
// condition z^p == conj(z) mod p^2 and the weaker norm condition
// N(z)^(p-1) == 1 mod p^2. A Wieferich-style prime can satisfy the weak
// condition alone (1093 does for c = 2).
struct MultipleFactorCheck {
    bool frobenius_holds;
    bool norm_fermat_holds;
};

// Requires p an odd prime < 2^32 with J(c/p) = -1.
MultipleFactorCheck multiple_factor_check(uint64_t p, int64_t c);

// Structural profile of a prime p as a hypothetical factor of a
// counterexample n with index c: any such n satisfies n == residue (mod
// modulus). Negative sign: modulus = Q_p = ord(z mod p), residue = p mod Q_p.
// Positive sign: modulus = lcm(ord z1, ord z2) with z -> (z1, z2) the
// component split at d = sqrt(c) mod p, and residue = p * A_p mod M_p where
// the cofactor must satisfy q == A_p (mod M_p); residue is absent when no
// admissible A_p exists.
struct PhiProfile {
    uint64_t p = 0;
    int64_t c = 0;
    int sign = 0; // J(c/p)
    uint64_t modulus = 0;
    std::optional<uint64_t> residue;

    // positive-sign detail
    std::optional<uint64_t> sqrt_c, z1, z2, ord_z1, ord_z2;
    std::optional<uint64_t> alpha;            // ord(N mod p), N = z1*z2
    std::optional<uint64_t> beta;             // ord(w mod p), w = z1/z2
    std::optional<uint64_t> cofactor_residue; // A_p
};

// Throws trivial_factor_error when J(c/p) = 0 or p divides N(z).
PhiProfile phi_profile(uint64_t p, int64_t c);

// The residue class (A_p, M_p) of cofactors q with z1^q == z2 and
// z2^q == z1 mod p, or absent when the pair of discrete-log conditions has
// no common solution. Brute force below 2^20, baby-step/giant-step above;
// the two agree on their overlap.
std::optional<std::pair<uint64_t, uint64_t>> phi_positive_admissible(uint64_t p, int64_t c);

// All n = p(1 + k*Q_p) <= n_bound, k >= 1: the only multiples of a
// Phi-negative p that could be counterexamples below the bound.
std::vector<uint64_t> phi_negative_candidates(uint64_t p, int64_t c, uint64_t n_bound);

enum class PairVerdict { Consistent, Inconsistent, Inadmissible };

// D_{p1} == D_{p2} (mod gcd(M_{p1}, M_{p2}))? An inadmissible Phi-positive
// member is reported distinctly (and rules the pair out by itself).
PairVerdict pair_consistency(uint64_t p1, uint64_t p2, int64_t c);
bool pair_consistent(uint64_t p1, uint64_t p2, int64_t c);

// Combined congruence on the cofactor q for n = (product of primes) * q.
struct TupleConstraint {
    mpz_class residue;
    mpz_class modulus;
};

struct TupleResult {
    std::optional<TupleConstraint> constraint;
    std::string clash; // which pair or side constraint clashed, when absent
};

// Chinese-remainder merge of the per-prime profiles with the index-c side
// congruences (n == 3 mod 4 for c = -1, 5 mod 8 for c = 2, 17 mod 24 for
// c = 3, 1 mod 24 for c >= 5, plus J(c'/n) = +1 feasibility for every index
// candidate c' < c).
TupleResult tuple_residue(const std::vector<uint64_t>& primes, int64_t c);

// Sweep helper used by the CLI and the harness: profiles for all odd primes
// in [p_min, p_max] with J(c/p) equal to sign (+1/-1), skipping primes that
// divide c or N(z).
std::vector<PhiProfile> phi_sweep(int64_t c, uint64_t p_min, uint64_t p_max, int sign);

} // namespace frob
