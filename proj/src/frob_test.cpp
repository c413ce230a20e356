#include "frob/frob_test.hpp"

#include <bit>
#include <numeric>

#include "frob/mont.hpp"

namespace frob {

namespace {
constexpr int64_t k_index_cap = 1021;
}

int64_t frobenius_index(uint64_t n) {
    if (n < 3 || (n & 1) == 0)
        throw not_applicable("frobenius_index: n must be odd and >= 3");
    if (is_perfect_square(n))
        throw not_applicable("frobenius_index: n is a perfect square");
    if (jacobi(-1, n) != 1) return -1;
    for (uint64_t c : detail::small_primes()) {
        if (c > static_cast<uint64_t>(k_index_cap)) break;
        if (jacobi_unsigned(c, n) != 1) return static_cast<int64_t>(c);
    }
    throw std::runtime_error("frobenius_index: no index <= 1021 (cap exceeded)");
}

std::pair<uint64_t, uint64_t> standard_base(int64_t c) {
    if (c == -1 || c == 2) return {2, 1};
    if (c >= 3) return {1, 1};
    throw std::invalid_argument("standard_base: invalid index value");
}

bool raw_frobenius_relation(uint64_t n, uint64_t a, uint64_t b, int64_t c) {
    if (n < 3 || (n & 1) == 0)
        throw std::invalid_argument("raw_frobenius_relation: n must be odd and >= 3");
    RingParams ring{n, c};
    QuadElem z{a % n, b % n};
    return q_pow(z, n, ring) == q_conj(z, ring);
}

TestOutcome frobenius_test(uint64_t n) {
    if (n == 2) return {Verdict::FrobeniusPrime, CompositeReason::None, {}, {}};
    if (n == 1) return {Verdict::Composite, CompositeReason::Square, {}, {}};
    if (n == 0 || (n & 1) == 0) return {Verdict::Composite, CompositeReason::Even, {}, {}};
    if (auto root = is_perfect_square(n))
        return {Verdict::Composite, CompositeReason::Square, root, {}};
    int64_t c = frobenius_index(n);
    if (c > 0 && jacobi(c, n) == 0)
        return {Verdict::FactorFound, CompositeReason::None, static_cast<uint64_t>(c), {}};
    auto [a, b] = standard_base(c);
    RingParams ring{n, c};
    QuadElem z{a % n, b % n};
    QuadElem zn = q_pow(z, n, ring);
    TestDiagnostics diag{c, z, zn};
    if (zn == q_conj(z, ring))
        return {Verdict::FrobeniusPrime, CompositeReason::None, {}, diag};
    return {Verdict::Composite, CompositeReason::FrobeniusEqualityFailed, {}, diag};
}

bool fermat_test(uint64_t n, uint64_t base) {
    if (n < 3 || (n & 1) == 0)
        throw std::invalid_argument("fermat_test: n must be odd and >= 3");
    base %= n;
    uint64_t g = std::gcd(base, n);
    if (g != 1) throw trivial_factor_error(g, "fermat_test: base shares a factor with n");
    return powmod(base, n - 1, n) == 1;
}

bool miller_rabin_round(uint64_t n, uint64_t base) {
    if (n < 3 || (n & 1) == 0)
        throw std::invalid_argument("miller_rabin_round: n must be odd and >= 3");
    if (base < 2 || base > n - 2)
        throw std::invalid_argument("miller_rabin_round: base must be in [2, n-2]");
    uint64_t d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    detail::Mont m(n);
    uint64_t x = m.pow(m.to(base), d);
    uint64_t minus_one = n - m.one();
    if (x == m.one() || x == minus_one) return true;
    for (int r = 1; r < s; ++r) {
        x = m.mul(x, x);
        if (x == minus_one) return true;
    }
    return false;
}

} // namespace frob
