#include "frob/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "frob/mont.hpp"

namespace frob {

using detail::u128;

uint64_t Factorization::reconstruct() const {
    uint64_t prod = 1;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i) prod *= p;
    return prod;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t n) {
    if (n < 2) throw std::invalid_argument("mulmod: modulus must be >= 2");
    return static_cast<uint64_t>(static_cast<u128>(a % n) * (b % n) % n);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t n) {
    if (n < 2) throw std::invalid_argument("powmod: modulus must be >= 2");
    a %= n;
    if (n & 1) {
        detail::Mont m(n);
        return m.from(m.pow(m.to(a), e));
    }
    uint64_t acc = 1 % n;
    while (e) {
        if (e & 1) acc = static_cast<uint64_t>(static_cast<u128>(acc) * a % n);
        a = static_cast<uint64_t>(static_cast<u128>(a) * a % n);
        e >>= 1;
    }
    return acc;
}

int jacobi_unsigned(uint64_t a, uint64_t n) {
    if (n == 0 || (n & 1) == 0)
        throw std::invalid_argument("jacobi: n must be odd and positive");
    uint64_t num = a % n, den = n;
    int t = 1;
    while (num != 0) {
        while ((num & 1) == 0) {
            num >>= 1;
            uint64_t d = den & 7;
            if (d == 3 || d == 5) t = -t; // J(2/den) = -1 for den = +-3 mod 8
        }
        std::swap(num, den);
        if ((num & 3) == 3 && (den & 3) == 3) t = -t; // quadratic reciprocity
        num %= den;
    }
    return den == 1 ? t : 0;
}

int jacobi(int64_t a, uint64_t n) {
    if (n == 0 || (n & 1) == 0)
        throw std::invalid_argument("jacobi: n must be odd and positive");
    if (a >= 0) return jacobi_unsigned(static_cast<uint64_t>(a), n);
    uint64_t mag = static_cast<uint64_t>(-(a + 1)) + 1; // |a|, safe at INT64_MIN
    uint64_t r = mag % n;
    if (r != 0) r = n - r;
    return jacobi_unsigned(r, n);
}

std::optional<uint64_t> is_perfect_square(uint64_t n) {
    static constexpr uint64_t residue_mask = [] {
        uint64_t m = 0;
        for (uint64_t i = 0; i < 64; ++i) m |= uint64_t{1} << ((i * i) & 63);
        return m;
    }();
    if (!((residue_mask >> (n & 63)) & 1)) return std::nullopt;
    auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    if (static_cast<u128>(r) * r == n) return r;
    return std::nullopt;
}

uint64_t sqrt_mod_prime(uint64_t c, uint64_t p) {
    if (p < 3 || (p & 1) == 0)
        throw std::invalid_argument("sqrt_mod_prime: p must be an odd prime");
    c %= p;
    if (jacobi_unsigned(c, p) != 1)
        throw no_square_root("sqrt_mod_prime: argument is not a quadratic residue");
    uint64_t d;
    if ((p & 3) == 3) {
        d = powmod(c, (p >> 2) + 1, p); // (p+1)/4 without overflow
    } else {
        // Tonelli-Shanks
        uint64_t q = p - 1;
        int s = std::countr_zero(q);
        q >>= s;
        uint64_t nr = 2;
        while (jacobi_unsigned(nr, p) != -1) ++nr;
        detail::Mont mm(p);
        uint64_t g = mm.pow(mm.to(nr), q);
        uint64_t t = mm.pow(mm.to(c), q);
        uint64_t x = mm.pow(mm.to(c), (q + 1) >> 1);
        int m = s;
        while (t != mm.one()) {
            uint64_t t2 = t;
            int i = 0;
            while (t2 != mm.one()) {
                t2 = mm.mul(t2, t2);
                ++i;
            }
            uint64_t b = g;
            for (int j = 0; j < m - i - 1; ++j) b = mm.mul(b, b);
            x = mm.mul(x, b);
            g = mm.mul(b, b);
            t = mm.mul(t, g);
            m = i;
        }
        d = mm.from(x);
    }
    return std::min(d, p - d);
}

namespace detail {

const std::vector<uint64_t>& small_primes() {
    static const std::vector<uint64_t> primes = [] {
        std::vector<uint64_t> out;
        std::vector<bool> sieve(1024, true);
        for (uint64_t i = 2; i < 1024; ++i) {
            if (!sieve[i]) continue;
            out.push_back(i);
            for (uint64_t j = i * i; j < 1024; j += i) sieve[j] = false;
        }
        return out;
    }();
    return primes;
}

} // namespace detail

namespace {

bool sprp(const detail::Mont& m, uint64_t d, int s, uint64_t base) {
    uint64_t a = base % m.n;
    if (a == 0) return true;
    uint64_t x = m.pow(m.to(a), d);
    uint64_t minus_one = m.n - m.one();
    if (x == m.one() || x == minus_one) return true;
    for (int i = 1; i < s; ++i) {
        x = m.mul(x, x);
        if (x == minus_one) return true;
    }
    return false;
}

// deterministic below 2^64 (Sorenson & Webster witness set)
constexpr uint64_t k_witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

uint64_t rho_split(uint64_t n) {
    // Brent's variant of Pollard rho on odd composite n with no factor <= 37.
    // The polynomial increment advances 1, 2, 3, ... on each failed cycle,
    // keeping runs reproducible.
    detail::Mont m(n);
    for (uint64_t inc = 1;; ++inc) {
        const uint64_t c = m.to(inc % n);
        uint64_t y = m.to(2 % n), q = m.one();
        uint64_t g = 1, r = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = m.add(m.mul(y, y), c);
            for (uint64_t k = 0; k < r && g == 1; k += 128) {
                ys = y;
                uint64_t lim = std::min<uint64_t>(128, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = m.add(m.mul(y, y), c);
                    q = m.mul(q, m.sub(x, y));
                }
                g = std::gcd(q, n); // gcd unchanged by the Montgomery factor
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            do {
                ys = m.add(m.mul(ys, ys), c);
                g = std::gcd(m.sub(x, ys), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_recurse(uint64_t n, std::map<uint64_t, int>& acc) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++acc[n];
        return;
    }
    uint64_t d = rho_split(n);
    factor_recurse(d, acc);
    factor_recurse(n / d, acc);
}

} // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : k_witnesses) {
        if (n % p == 0) return n == p;
    }
    if (n < 41 * 41) return true;
    uint64_t d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    detail::Mont m(n);
    for (uint64_t w : k_witnesses)
        if (!sprp(m, d, s, w)) return false;
    return true;
}

Factorization factorize(uint64_t n) {
    if (n < 2) throw std::invalid_argument("factorize: n must be >= 2");
    Factorization out;
    out.value = n;
    std::map<uint64_t, int> acc;
    for (uint64_t p : detail::small_primes()) {
        if (p * p > n) break;
        while (n % p == 0) {
            ++acc[p];
            n /= p;
        }
    }
    factor_recurse(n, acc);
    out.factors.assign(acc.begin(), acc.end());
    return out;
}

uint64_t multiplicative_order(uint64_t a, uint64_t p, const Factorization& group_order) {
    if (p < 2) throw std::invalid_argument("multiplicative_order: p must be >= 2");
    a %= p;
    if (a == 0) throw std::invalid_argument("multiplicative_order: a is 0 mod p");
    if (group_order.value != p - 1)
        throw std::invalid_argument("multiplicative_order: group_order is not factorize(p-1)");
    uint64_t t = group_order.value;
    detail::Mont m(p);
    uint64_t am = m.to(a);
    if (m.pow(am, t) != m.one())
        throw std::invalid_argument("multiplicative_order: a^(p-1) != 1, p not prime or a not a unit");
    for (auto [f, e] : group_order.factors) {
        for (int i = 0; i < e; ++i) {
            if (m.pow(am, t / f) == m.one())
                t /= f;
            else
                break;
        }
    }
    return t;
}

} // namespace frob
