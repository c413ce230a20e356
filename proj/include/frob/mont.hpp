#pragma once

#include <cstdint>

namespace frob::detail {

using u128 = unsigned __int128;

// Montgomery arithmetic mod an odd 64-bit modulus. Residues are kept in
// Montgomery form (x * 2^64 mod n). Valid for the full modulus range,
// including n > 2^63; redc accepts any t < n * 2^64.
struct Mont {
    uint64_t n;
    uint64_t ninv; // -n^{-1} mod 2^64
    uint64_t r;    // 2^64 mod n, the Montgomery form of 1
    uint64_t r2;   // 2^128 mod n

    explicit Mont(uint64_t modulus) : n(modulus) {
        // Newton iteration, doubles the number of correct low bits per step.
        uint64_t inv = n;
        for (int i = 0; i < 5; ++i) inv *= 2 - n * inv;
        ninv = 0 - inv;
        r = (0 - n) % n;
        r2 = static_cast<uint64_t>(static_cast<u128>(r) * r % n);
    }

    uint64_t one() const { return r; }

    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        // wraparound check first: n may exceed 2^63
        if (s < a || s >= n) s -= n;
        return s;
    }

    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + (n - b); }

    uint64_t redc(u128 t) const {
        uint64_t m = static_cast<uint64_t>(t) * ninv;
        u128 mn = static_cast<u128>(m) * n;
        // low halves of t and m*n sum to 0 mod 2^64 by construction of m
        uint64_t carry = static_cast<uint64_t>(t) != 0;
        uint64_t res;
        bool ovf = __builtin_add_overflow(static_cast<uint64_t>(t >> 64),
                                          static_cast<uint64_t>(mn >> 64) + carry, &res);
        if (ovf || res >= n) res -= n;
        return res;
    }

    uint64_t mul(uint64_t a, uint64_t b) const { return redc(static_cast<u128>(a) * b); }
    uint64_t to(uint64_t x) const { return mul(x, r2); } // x must be < n
    uint64_t from(uint64_t x) const { return redc(static_cast<u128>(x)); }

    // base in Montgomery form; returns base^e in Montgomery form
    uint64_t pow(uint64_t base, uint64_t e) const {
        uint64_t acc = one();
        while (e) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }
};

} // namespace frob::detail
