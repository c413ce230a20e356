#pragma once

#include <cstdint>

#include "frob/arith.hpp"

namespace frob {

// Parameters of the residue ring Z_n[sqrt(c)]: odd modulus n >= 3 and a
// square-free radicand c (c = -1 or a positive non-square; never 0 or 1).
struct RingParams {
    uint64_t n;
    int64_t c;
};

// Element a + b*sqrt(c), both coordinates reduced mod n. Equality is bitwise.
struct QuadElem {
    uint64_t a = 0;
    uint64_t b = 0;
    bool operator==(const QuadElem&) const = default;
};

// c reduced into [0, n).
uint64_t reduce_radicand(int64_t c, uint64_t n);

QuadElem q_mul(QuadElem x, QuadElem y, const RingParams& ring);
QuadElem q_sqr(QuadElem x, const RingParams& ring);

// z^e by left-to-right binary exponentiation; e == 0 gives 1 + 0*sqrt(c).
QuadElem q_pow(QuadElem z, uint64_t e, const RingParams& ring);

// a - b*sqrt(c); the image of z under the Frobenius automorphism when
// J(c/n) = -1 and n is prime.
QuadElem q_conj(QuadElem z, const RingParams& ring);

// N(z) = a^2 - c*b^2 mod n; multiplicative, equals Rat(z * conj(z)).
uint64_t q_norm(QuadElem z, const RingParams& ring);

// Least t >= 1 with z^t == 1 in Z_p[sqrt(c)], for prime p with J(c/p) = -1.
// group_order must be factorize(p^2 - 1); p is capped below 2^32 so that
// p^2 - 1 fits in 64 bits. Computed by dividing prime factors out of the
// group order, never by iteration. Non-invertible z (norm == 0) throws.
uint64_t quad_order(QuadElem z, uint64_t p, int64_t c, const Factorization& group_order);

} // namespace frob
