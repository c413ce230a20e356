#include "frob/quad_ring.hpp"

#include <bit>

#include "frob/mont.hpp"

namespace frob {

using detail::u128;

namespace {

constexpr int64_t k_radicand_cap = int64_t{1} << 31;

void validate_ring(const RingParams& ring) {
    if (ring.n < 3 || (ring.n & 1) == 0)
        throw std::invalid_argument("quad ring: modulus must be odd and >= 3");
    if (ring.c == 0 || ring.c == 1)
        throw std::invalid_argument("quad ring: radicand must not be 0 or 1");
    if (ring.c >= k_radicand_cap || ring.c <= -k_radicand_cap)
        throw std::invalid_argument("quad ring: |radicand| must be < 2^31");
}

void validate_elem(QuadElem z, const RingParams& ring) {
    if (z.a >= ring.n || z.b >= ring.n)
        throw std::invalid_argument("quad ring: element not reduced mod n");
}

uint64_t addmod(uint64_t a, uint64_t b, uint64_t n) {
    uint64_t s = a + b;
    if (s < a || s >= n) s -= n;
    return s;
}

uint64_t submod(uint64_t a, uint64_t b, uint64_t n) { return a >= b ? a - b : a + (n - b); }

uint64_t mul(uint64_t a, uint64_t b, uint64_t n) {
    return static_cast<uint64_t>(static_cast<u128>(a) * b % n);
}

} // namespace

uint64_t reduce_radicand(int64_t c, uint64_t n) {
    if (c >= 0) return static_cast<uint64_t>(c) % n;
    uint64_t m = static_cast<uint64_t>(-c) % n;
    return m == 0 ? 0 : n - m;
}

QuadElem q_mul(QuadElem x, QuadElem y, const RingParams& ring) {
    validate_ring(ring);
    validate_elem(x, ring);
    validate_elem(y, ring);
    const uint64_t n = ring.n;
    const uint64_t cr = reduce_radicand(ring.c, n);
    uint64_t a = addmod(mul(x.a, y.a, n), mul(cr, mul(x.b, y.b, n), n), n);
    uint64_t b = addmod(mul(x.a, y.b, n), mul(x.b, y.a, n), n);
    return {a, b};
}

QuadElem q_sqr(QuadElem x, const RingParams& ring) {
    validate_ring(ring);
    validate_elem(x, ring);
    const uint64_t n = ring.n;
    const uint64_t cr = reduce_radicand(ring.c, n);
    uint64_t a = addmod(mul(x.a, x.a, n), mul(cr, mul(x.b, x.b, n), n), n);
    uint64_t ab = mul(x.a, x.b, n);
    return {a, addmod(ab, ab, n)};
}

QuadElem q_pow(QuadElem z, uint64_t e, const RingParams& ring) {
    validate_ring(ring);
    validate_elem(z, ring);
    const detail::Mont m(ring.n);
    const uint64_t cm = m.to(reduce_radicand(ring.c, ring.n));
    const uint64_t ba = m.to(z.a), bb = m.to(z.b);
    if (e == 0) return {m.from(m.one()), 0};
    uint64_t ra = ba, rb = bb;
    for (int i = 63 - std::countl_zero(e) - 1; i >= 0; --i) {
        // dedicated squaring: (a^2 + c b^2, 2ab)
        uint64_t aa = m.mul(ra, ra);
        uint64_t bb2 = m.mul(rb, rb);
        uint64_t ab = m.mul(ra, rb);
        ra = m.add(aa, m.mul(cm, bb2));
        rb = m.add(ab, ab);
        if ((e >> i) & 1) {
            uint64_t na = m.add(m.mul(ra, ba), m.mul(cm, m.mul(rb, bb)));
            uint64_t nb = m.add(m.mul(ra, bb), m.mul(rb, ba));
            ra = na;
            rb = nb;
        }
    }
    return {m.from(ra), m.from(rb)};
}

QuadElem q_conj(QuadElem z, const RingParams& ring) {
    validate_ring(ring);
    validate_elem(z, ring);
    return {z.a, z.b == 0 ? 0 : ring.n - z.b};
}

uint64_t q_norm(QuadElem z, const RingParams& ring) {
    validate_ring(ring);
    validate_elem(z, ring);
    const uint64_t n = ring.n;
    const uint64_t cr = reduce_radicand(ring.c, n);
    return submod(mul(z.a, z.a, n), mul(cr, mul(z.b, z.b, n), n), n);
}

uint64_t quad_order(QuadElem z, uint64_t p, int64_t c, const Factorization& group_order) {
    if (p >= (uint64_t{1} << 32))
        throw std::invalid_argument("quad_order: p must be < 2^32 so p^2-1 fits 64 bits");
    RingParams ring{p, c};
    validate_ring(ring);
    validate_elem(z, ring);
    if (jacobi(c, p) != -1)
        throw std::invalid_argument("quad_order: requires J(c/p) = -1");
    if (q_norm(z, ring) == 0)
        throw std::invalid_argument("quad_order: element not invertible (norm == 0)");
    const uint64_t full = p * p - 1;
    if (group_order.value != full)
        throw std::invalid_argument("quad_order: group_order is not factorize(p^2-1)");
    const QuadElem one{1 % p, 0};
    if (q_pow(z, full, ring) != one)
        throw std::invalid_argument("quad_order: z^(p^2-1) != 1, preconditions violated");
    uint64_t t = full;
    for (auto [f, e] : group_order.factors) {
        for (int i = 0; i < e; ++i) {
            if (q_pow(z, t / f, ring) == one)
                t /= f;
            else
                break;
        }
    }
    return t;
}

} // namespace frob
