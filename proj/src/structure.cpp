#include "frob/structure.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "frob/frob_test.hpp"
#include "frob/mont.hpp"

namespace frob {

using detail::u128;

namespace {

constexpr uint64_t k_profile_p_cap = uint64_t{1} << 32; // keeps p^2 - 1 in 64 bits
constexpr uint64_t k_brute_force_cap = uint64_t{1} << 20;

void validate_profile_prime(uint64_t p) {
    if (p >= k_profile_p_cap)
        throw std::out_of_range("structure: p must be < 2^32");
    if (p < 3 || (p & 1) == 0 || !is_prime(p))
        throw std::invalid_argument("structure: p must be an odd prime");
}

// x in [0, m) with g^x == h mod p, given ord(g) = m. Baby-step/giant-step.
std::optional<uint64_t> discrete_log(uint64_t g, uint64_t h, uint64_t m, uint64_t p) {
    detail::Mont mont(p);
    uint64_t step = static_cast<uint64_t>(std::ceil(std::sqrt(static_cast<double>(m))));
    if (step == 0) step = 1;
    std::unordered_map<uint64_t, uint64_t> baby;
    baby.reserve(step * 2);
    uint64_t gm = mont.to(g % p), hm = mont.to(h % p);
    uint64_t cur = mont.one();
    for (uint64_t j = 0; j < step; ++j) {
        baby.emplace(cur, j); // keeps the smallest j on collision
        cur = mont.mul(cur, gm);
    }
    uint64_t giant = mont.pow(gm, m - (step % m)); // g^{-step}
    cur = hm;
    for (uint64_t i = 0; i * step < m + step; ++i) {
        auto it = baby.find(cur);
        if (it != baby.end()) return (i * step + it->second) % m;
        cur = mont.mul(cur, giant);
    }
    return std::nullopt;
}

// inverse of a mod m (gcd(a, m) = 1), extended Euclid; m < 2^32 here
uint64_t inv_mod(uint64_t a, uint64_t m) {
    int64_t t = 0, new_t = 1;
    int64_t r = static_cast<int64_t>(m), new_r = static_cast<int64_t>(a % m);
    while (new_r != 0) {
        int64_t quot = r / new_r;
        t = std::exchange(new_t, t - quot * new_t);
        r = std::exchange(new_r, r - quot * new_r);
    }
    return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(m) : t);
}

// q == r1 mod m1 and q == r2 mod m2 merged; nullopt when incompatible.
// Moduli here divide p-1 < 2^32, so the lcm stays well inside 64 bits.
std::optional<std::pair<uint64_t, uint64_t>> crt64(uint64_t r1, uint64_t m1, uint64_t r2,
                                                   uint64_t m2) {
    uint64_t g = std::gcd(m1, m2);
    if (r1 % g != r2 % g) return std::nullopt;
    uint64_t lcm = m1 / g * m2;
    uint64_t m2g = m2 / g;
    if (m2g == 1) return std::make_pair(r1 % lcm, lcm);
    uint64_t diff = (r2 % m2 + m2 - r1 % m2) % m2; // == r2 - r1 (mod m2), multiple of g
    uint64_t k = static_cast<uint64_t>(static_cast<u128>(diff / g) * inv_mod(m1 / g, m2g) % m2g);
    u128 res = static_cast<u128>(m1) * k + r1;
    return std::make_pair(static_cast<uint64_t>(res % lcm), lcm);
}

struct PositiveSplit {
    uint64_t d, z1, z2, ord1, ord2, alpha, beta, lcm;
};

PositiveSplit positive_split(uint64_t p, int64_t c, uint64_t a, uint64_t b) {
    PositiveSplit s{};
    s.d = sqrt_mod_prime(reduce_radicand(c, p), p);
    uint64_t bd = mulmod(b % p, s.d, p);
    s.z1 = (a % p + bd) % p;
    s.z2 = (a % p + p - bd) % p;
    Factorization fp = factorize(p - 1);
    s.ord1 = multiplicative_order(s.z1, p, fp);
    s.ord2 = multiplicative_order(s.z2, p, fp);
    uint64_t norm = mulmod(s.z1, s.z2, p);
    s.alpha = multiplicative_order(norm, p, fp);
    uint64_t w = mulmod(s.z1, powmod(s.z2, p - 2, p), p);
    s.beta = multiplicative_order(w, p, fp);
    s.lcm = s.ord1 / std::gcd(s.ord1, s.ord2) * s.ord2;
    return s;
}

std::optional<std::pair<uint64_t, uint64_t>> admissible_from_split(const PositiveSplit& s,
                                                                   uint64_t p) {
    if (std::gcd(s.alpha, s.beta) > 2) return std::nullopt;
    if (p < k_brute_force_cap) {
        detail::Mont mont(p);
        uint64_t z1m = mont.to(s.z1), z2m = mont.to(s.z2);
        uint64_t r1 = mont.one(), r2 = mont.one();
        for (uint64_t t = 0; t < s.lcm; ++t) {
            if (r1 == z2m && r2 == z1m) return std::make_pair(t, s.lcm);
            r1 = mont.mul(r1, z1m);
            r2 = mont.mul(r2, z2m);
        }
        return std::nullopt;
    }
    auto t1 = discrete_log(s.z1, s.z2, s.ord1, p);
    if (!t1) return std::nullopt;
    auto t2 = discrete_log(s.z2, s.z1, s.ord2, p);
    if (!t2) return std::nullopt;
    return crt64(*t1, s.ord1, *t2, s.ord2);
}

// the congruence a number must satisfy for its Frobenius index to be c
std::pair<uint64_t, uint64_t> index_congruence(int64_t c) {
    if (c == -1) return {3, 4};
    if (c == 2) return {5, 8};
    if (c == 3) return {17, 24};
    if (c >= 5) return {1, 24};
    throw std::invalid_argument("index_congruence: invalid index");
}

std::optional<std::pair<mpz_class, mpz_class>> crt_mpz(const mpz_class& r1, const mpz_class& m1,
                                                       const mpz_class& r2, const mpz_class& m2) {
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    mpz_class diff = r2 - r1;
    if (diff % g != 0) return std::nullopt;
    mpz_class lcm = m1 / g * m2;
    mpz_class res = r1 + m1 * ((diff / g * s) % (m2 / g));
    res %= lcm;
    if (res < 0) res += lcm;
    return std::make_pair(res, lcm);
}

} // namespace

MultipleFactorCheck multiple_factor_check(uint64_t p, int64_t c) {
    validate_profile_prime(p);
    if (jacobi(c, p) != -1)
        throw std::invalid_argument("multiple_factor_check: requires J(c/p) = -1");
    auto [a, b] = standard_base(c);
    RingParams ring{p * p, c};
    QuadElem z{a, b};
    bool frob = q_pow(z, p, ring) == q_conj(z, ring);
    uint64_t norm = q_norm(z, ring);
    bool ferm = norm != 0 && powmod(norm, p - 1, ring.n) == 1;
    return {frob, ferm};
}

PhiProfile phi_profile(uint64_t p, int64_t c) {
    validate_profile_prime(p);
    int sign = jacobi(c, p);
    if (sign == 0) {
        uint64_t mag = c < 0 ? static_cast<uint64_t>(-c) : static_cast<uint64_t>(c);
        throw trivial_factor_error(std::gcd(mag, p), "phi_profile: p divides c");
    }
    auto [a, b] = standard_base(c);
    RingParams ring{p, c};
    QuadElem z{a % p, b % p};
    if (q_norm(z, ring) == 0)
        throw trivial_factor_error(p, "phi_profile: p divides the norm of the base");

    PhiProfile prof;
    prof.p = p;
    prof.c = c;
    prof.sign = sign;
    if (sign == -1) {
        uint64_t q = quad_order(z, p, c, factorize(p * p - 1));
        prof.modulus = q;
        prof.residue = p % q;
        return prof;
    }
    PositiveSplit s = positive_split(p, c, z.a, z.b);
    prof.modulus = s.lcm;
    prof.sqrt_c = s.d;
    prof.z1 = s.z1;
    prof.z2 = s.z2;
    prof.ord_z1 = s.ord1;
    prof.ord_z2 = s.ord2;
    prof.alpha = s.alpha;
    prof.beta = s.beta;
    if (auto adm = admissible_from_split(s, p)) {
        prof.cofactor_residue = adm->first;
        // n = p q and q == A_p (mod M_p) force n == p A_p (mod M_p)
        prof.residue = s.lcm == 1 ? 0 : mulmod(p % s.lcm, adm->first % s.lcm, s.lcm);
    }
    return prof;
}

std::optional<std::pair<uint64_t, uint64_t>> phi_positive_admissible(uint64_t p, int64_t c) {
    validate_profile_prime(p);
    if (jacobi(c, p) != 1)
        throw std::invalid_argument("phi_positive_admissible: requires J(c/p) = +1");
    auto [a, b] = standard_base(c);
    RingParams ring{p, c};
    QuadElem z{a % p, b % p};
    if (q_norm(z, ring) == 0)
        throw trivial_factor_error(p, "phi_positive_admissible: p divides the norm of the base");
    return admissible_from_split(positive_split(p, c, z.a, z.b), p);
}

std::vector<uint64_t> phi_negative_candidates(uint64_t p, int64_t c, uint64_t n_bound) {
    validate_profile_prime(p);
    if (jacobi(c, p) != -1)
        throw std::invalid_argument("phi_negative_candidates: requires J(c/p) = -1");
    auto [a, b] = standard_base(c);
    QuadElem z{a % p, b % p};
    uint64_t q = quad_order(z, p, c, factorize(p * p - 1));
    std::vector<uint64_t> out;
    for (u128 k = 1;; ++k) {
        u128 cof = 1 + k * q;
        u128 n = cof * p;
        if (n > n_bound) break;
        out.push_back(static_cast<uint64_t>(n));
    }
    return out;
}

PairVerdict pair_consistency(uint64_t p1, uint64_t p2, int64_t c) {
    PhiProfile a = phi_profile(p1, c);
    PhiProfile b = phi_profile(p2, c);
    if (!a.residue || !b.residue) return PairVerdict::Inadmissible;
    uint64_t g = std::gcd(a.modulus, b.modulus);
    return (*a.residue % g) == (*b.residue % g) ? PairVerdict::Consistent
                                                : PairVerdict::Inconsistent;
}

bool pair_consistent(uint64_t p1, uint64_t p2, int64_t c) {
    return pair_consistency(p1, p2, c) == PairVerdict::Consistent;
}

TupleResult tuple_residue(const std::vector<uint64_t>& primes, int64_t c) {
    if (primes.size() < 3 || primes.size() > 4)
        throw std::invalid_argument("tuple_residue: expected 3 or 4 primes");
    TupleResult result;

    std::vector<PhiProfile> profiles;
    for (uint64_t p : primes) {
        PhiProfile prof = phi_profile(p, c);
        if (!prof.residue) {
            result.clash = "inadmissible p=" + std::to_string(p);
            return result;
        }
        profiles.push_back(std::move(prof));
    }
    for (size_t i = 0; i < profiles.size(); ++i)
        for (size_t j = i + 1; j < profiles.size(); ++j) {
            uint64_t g = std::gcd(profiles[i].modulus, profiles[j].modulus);
            if (*profiles[i].residue % g != *profiles[j].residue % g) {
                result.clash = "inconsistent pair (" + std::to_string(primes[i]) + "," +
                               std::to_string(primes[j]) + ")";
                return result;
            }
        }

    auto [ir, im] = index_congruence(c);
    mpz_class res = ir, mod = im;
    for (const PhiProfile& prof : profiles) {
        auto merged = crt_mpz(res, mod, mpz_class(*prof.residue), mpz_class(prof.modulus));
        if (!merged) {
            result.clash = "index congruence clash at p=" + std::to_string(prof.p);
            return result;
        }
        res = merged->first;
        mod = merged->second;
    }

    // J(c'/n) = +1 feasibility for every smaller index candidate c'. For
    // c >= 5 the mod-24 congruence already pins c' in {-1, 2, 3}; an odd
    // prime candidate only constrains n when it divides the merged modulus.
    if (c >= 5) {
        for (uint64_t cp : detail::small_primes()) {
            if (cp < 5) continue;
            if (static_cast<int64_t>(cp) >= c) break;
            if (!mpz_divisible_ui_p(mod.get_mpz_t(), cp)) continue;
            uint64_t x = mpz_fdiv_ui(res.get_mpz_t(), cp);
            if (x == 0 || jacobi_unsigned(x, cp) != 1) {
                result.clash = "J(" + std::to_string(cp) + "/n) = +1 infeasible";
                return result;
            }
        }
    }

    // convert the congruence on n into one on the cofactor q: P q == res (mod)
    mpz_class product = 1;
    for (uint64_t p : primes) product *= p;
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), product.get_mpz_t(), mod.get_mpz_t());
    if (res % g != 0) {
        result.clash = "tuple product incompatible with merged congruence";
        return result;
    }
    mpz_class qmod = mod / g;
    mpz_class qres = (res / g * s) % qmod;
    if (qres < 0) qres += qmod;
    result.constraint = TupleConstraint{qres, qmod};
    return result;
}

std::vector<PhiProfile> phi_sweep(int64_t c, uint64_t p_min, uint64_t p_max, int sign) {
    std::vector<PhiProfile> out;
    if (p_min < 3) p_min = 3;
    for (uint64_t p = p_min | 1; p <= p_max; p += 2) {
        if (!is_prime(p)) continue;
        if (jacobi(c, p) != sign) continue;
        try {
            out.push_back(phi_profile(p, c));
        } catch (const trivial_factor_error&) {
            // p divides c or the base norm; not a candidate factor
        }
    }
    return out;
}

} // namespace frob
