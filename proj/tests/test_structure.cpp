#include <doctest.h>

#include <random>

#include "frob/frob_test.hpp"
#include "frob/structure.hpp"
#include "oracles.hpp"

using namespace frob;

TEST_SUITE_BEGIN("structure");

TEST_CASE("multiple_factor_check") {
    auto r7 = multiple_factor_check(7, -1);
    CHECK(!r7.frobenius_holds);
    // cross-check against the exact route in Z_49[i]
    auto [pa, pb] = oracle::quad_pow_mpz(2, 1, -1, 7, 49);
    CHECK((pa == 2 && pb == 48) == r7.frobenius_holds);

    // 1093 is a base-2 Wieferich prime: with c = 2 the norm is 2, so the
    // weak condition holds while the full condition must not
    auto w = multiple_factor_check(1093, 2);
    CHECK(!w.frobenius_holds);
    CHECK(w.norm_fermat_holds);
    for (uint64_t c : detail::small_primes()) {
        if (c >= 128) break;
        if (jacobi_unsigned(c, 1093) != -1) continue;
        CHECK(!multiple_factor_check(1093, static_cast<int64_t>(c)).frobenius_holds);
    }
    if (jacobi(-1, 1093) == -1) CHECK(!multiple_factor_check(1093, -1).frobenius_holds);

    CHECK_THROWS_AS(multiple_factor_check(13, -1), std::invalid_argument); // J = +1
    CHECK_THROWS_AS(multiple_factor_check(15, -1), std::invalid_argument); // composite
    CHECK_THROWS_AS(multiple_factor_check(uint64_t{1} << 32, -1), std::out_of_range);
}

TEST_CASE("multiple-factor sweep below 10^4: no meaningful full-condition hit") {
    // (5, 83) satisfies the congruence but is vacuous: a multiple factor p
    // of n with ind_F(n) = c needs J(c'/n) = +1 for every candidate c' < c,
    // and p = 5 < 83 forces J(5/n) = 0 instead. Meaningful pairs have p > c.
    auto v = multiple_factor_check(5, 83);
    CHECK(v.frobenius_holds);
    CHECK(v.norm_fermat_holds);

    auto sieve = oracle::prime_sieve(10000);
    for (uint64_t p = 3; p < 10000; p += 2) {
        if (!sieve[p]) continue;
        if (jacobi(-1, p) == -1) REQUIRE(!multiple_factor_check(p, -1).frobenius_holds);
        for (uint64_t c : detail::small_primes()) {
            if (c >= 128) break;
            if (c >= p) break; // vacuous region
            if (jacobi_unsigned(c, p) != -1) continue;
            REQUIRE(!multiple_factor_check(p, static_cast<int64_t>(c)).frobenius_holds);
        }
    }
}

TEST_CASE("phi_profile negative sign") {
    PhiProfile prof = phi_profile(1000003, -1);
    CHECK(prof.sign == -1);
    CHECK(prof.modulus == 1000006000008ull);
    CHECK(prof.residue == 1000003);
    CHECK((1000003ull * 1000003 - 1) % prof.modulus == 0);

    CHECK_THROWS_AS(phi_profile(5, -1), trivial_factor_error); // N(2+i) = 5
    CHECK_THROWS_AS(phi_profile(7, 7), trivial_factor_error);  // J = 0
    CHECK_THROWS_AS(phi_profile(9, -1), std::invalid_argument);
}

TEST_CASE("phi_profile positive sign, worked example c=7 p=31") {
    PhiProfile prof = phi_profile(31, 7);
    CHECK(prof.sign == 1);
    REQUIRE(prof.sqrt_c.has_value());
    CHECK(prof.sqrt_c == 10); // 10^2 = 100 == 7 mod 31, canonical min root
    CHECK(prof.z1 == 11);     // 1 + 10
    CHECK(prof.z2 == 22);     // 1 - 10 mod 31
    CHECK(prof.ord_z1 == 30);
    CHECK(prof.ord_z2 == 30);
    CHECK(prof.alpha == 3); // ord(25)
    CHECK(prof.beta == 5);  // ord(16)
    CHECK(prof.modulus == 30);
    CHECK(prof.cofactor_residue == 19); // 11^19 == 22 and 22^19 == 11 mod 31
    CHECK(prof.residue == 19);          // 31 * 19 mod 30
}

TEST_CASE("phi_positive_admissible: reduced table of 8") {
    struct Entry {
        int64_t c;
        uint64_t p;
    };
    const Entry entries[] = {{2, 8191},   {7, 31},   {7, 3923},     {11, 98641},
                             {29, 12637}, {61, 271}, {83, 3278741}, {101, 137}};
    for (auto [c, p] : entries) {
        auto adm = phi_positive_admissible(p, c);
        REQUIRE_MESSAGE(adm.has_value(), "c=", c, " p=", p);
        auto [A, M] = *adm;
        // defining equations of the admissible class
        PhiProfile prof = phi_profile(p, c);
        REQUIRE(prof.z1.has_value());
        uint64_t z1 = *prof.z1, z2 = *prof.z2;
        CHECK(powmod(z1, A, p) == z2);
        CHECK(powmod(z2, A, p) == z1);
        CHECK(M == prof.modulus);
        CHECK((p - 1) % M == 0); // M_p divides p-1
        // norm and ratio orders: N^(q-1) == 1, w^(q+1) == 1 for q == A
        uint64_t norm = mulmod(z1, z2, p);
        uint64_t w = mulmod(z1, powmod(z2, p - 2, p), p);
        CHECK(powmod(norm, A - 1, p) == 1);
        CHECK(powmod(w, A + 1, p) == 1);
        CHECK(std::gcd(*prof.alpha, *prof.beta) <= 2);
    }
}

TEST_CASE("admissibility: brute force and BSGS agree off their default ranges") {
    // BSGS-only entries re-derived by an independent in-test brute force
    for (auto [c, p] : {std::pair<int64_t, uint64_t>{83, 3278741}}) {
        auto adm = phi_positive_admissible(p, c);
        REQUIRE(adm.has_value());
        PhiProfile prof = phi_profile(p, c);
        uint64_t z1 = *prof.z1, z2 = *prof.z2;
        uint64_t r1 = 1, r2 = 1;
        uint64_t found = prof.modulus;
        for (uint64_t t = 0; t < prof.modulus; ++t) {
            if (r1 == z2 && r2 == z1) {
                found = t;
                break;
            }
            r1 = mulmod(r1, z1, p);
            r2 = mulmod(r2, z2, p);
        }
        CHECK(found == adm->first);
    }
    // inadmissible stays inadmissible under the same brute force
    for (auto [c, p] : {std::pair<int64_t, uint64_t>{-1, 13}, {2, 7}, {5, 11}}) {
        CHECK(!phi_positive_admissible(p, c).has_value());
        PhiProfile prof = phi_profile(p, c);
        uint64_t z1 = *prof.z1, z2 = *prof.z2;
        bool any = false;
        for (uint64_t t = 0; t < prof.modulus && !any; ++t)
            any = powmod(z1, t, p) == z2 && powmod(z2, t, p) == z1;
        CHECK(!any);
    }
}

TEST_CASE("phi_negative_candidates") {
    CHECK(phi_negative_candidates(10000019, -1, ~uint64_t{0}).empty());

    auto c18 = phi_negative_candidates(1000003, -1, ~uint64_t{0});
    REQUIRE(c18.size() == 18); // k <= 18 fits below 2^64
    uint64_t q = 1000006000008ull;
    for (size_t k = 0; k < c18.size(); ++k) {
        CHECK(c18[k] / 1000003 == 1 + (k + 1) * q);
        CHECK(c18[k] % 1000003 == 0);
    }
    // none of the candidates passes: p = 1000003 cannot divide a counterexample
    for (uint64_t n : c18) CHECK(!raw_frobenius_relation(n, 2, 1, -1));

    CHECK(phi_negative_candidates(100003, -1, ~uint64_t{0}).size() == 424236);
    CHECK_THROWS_AS(phi_negative_candidates(13, -1, ~uint64_t{0}), std::invalid_argument);
}

TEST_CASE("pair consistency: listed triples and quadruple pairs") {
    // triples (13,37,97) and (13,37,433) for c=5
    for (auto [p1, p2] : {std::pair<uint64_t, uint64_t>{13, 37},
                          {13, 97},
                          {37, 97},
                          {13, 433},
                          {37, 433},
                          {97, 433}})
        CHECK(pair_consistent(p1, p2, 5));
    // triple (11,47,71) for c=-1
    for (auto [p1, p2] : {std::pair<uint64_t, uint64_t>{11, 47}, {11, 71}, {47, 71}})
        CHECK(pair_consistent(p1, p2, -1));
    // quadruples (29,53,157,197) and (5,53,157,197) for c=2
    for (auto [p1, p2] : {std::pair<uint64_t, uint64_t>{29, 53},
                          {29, 157},
                          {29, 197},
                          {53, 157},
                          {53, 197},
                          {157, 197},
                          {5, 53},
                          {5, 157},
                          {5, 197}})
        CHECK(pair_consistent(p1, p2, 2));

    CHECK(pair_consistency(3, 7, -1) == PairVerdict::Inconsistent);
    CHECK(pair_consistency(13, 3, -1) == PairVerdict::Inadmissible); // J(-1/13) = +1
}

TEST_CASE("inconsistent pairs imply the relation fails") {
    std::mt19937_64 rng(40);
    auto sieve = oracle::prime_sieve(20000);
    std::vector<uint64_t> primes;
    for (uint64_t p = 3; p < 20000; p += 2)
        if (sieve[p]) primes.push_back(p);
    int hits = 0;
    while (hits < 1000) {
        uint64_t p1 = primes[rng() % primes.size()];
        uint64_t p2 = primes[rng() % primes.size()];
        if (p1 == p2) continue;
        uint64_t n = p1 * p2;
        int64_t c = frobenius_index(n);
        if (jacobi(c, n) == 0) continue;
        PairVerdict v;
        try {
            v = pair_consistency(p1, p2, c);
        } catch (const trivial_factor_error&) {
            continue;
        }
        if (v == PairVerdict::Consistent) continue;
        auto [a, b] = standard_base(c);
        REQUIRE(!raw_frobenius_relation(n, a, b, c));
        ++hits;
    }
}

TEST_CASE("tuple_residue") {
    TupleResult t = tuple_residue({13, 37, 97}, 5);
    REQUIRE(t.constraint.has_value());
    {
        // spot-check the merged class: n = 13*37*97*q must satisfy every
        // per-prime congruence and the index congruence n == 1 mod 24
        mpz_class P = 13 * 37 * 97;
        for (int k = 0; k < 50; ++k) {
            mpz_class q = t.constraint->residue + k * t.constraint->modulus;
            mpz_class n = P * q;
            for (uint64_t p : {13ull, 37ull, 97ull}) {
                PhiProfile prof = phi_profile(p, 5);
                CHECK(n % prof.modulus == *prof.residue % prof.modulus);
            }
            CHECK(n % 24 == 1);
        }
    }
    CHECK(tuple_residue({7, 19, 79}, -1).constraint.has_value());
    CHECK(tuple_residue({13, 37, 433}, 5).constraint.has_value());
    // the quadruples of the final case analysis admit constraints too
    CHECK(tuple_residue({29, 53, 157, 197}, 2).constraint.has_value());
    CHECK(tuple_residue({5, 53, 157, 197}, 2).constraint.has_value());
    CHECK(tuple_residue({13, 37, 97, 433}, 5).constraint.has_value());
    CHECK(tuple_residue({11, 47, 71, 691}, -1).constraint.has_value());

    TupleResult clash = tuple_residue({3, 7, 11}, -1);
    CHECK(!clash.constraint.has_value());
    CHECK(clash.clash.find("(3,7)") != std::string::npos);

    TupleResult inadm = tuple_residue({13, 3, 7}, -1);
    CHECK(!inadm.constraint.has_value());
    CHECK(inadm.clash.find("13") != std::string::npos);

    CHECK_THROWS_AS(tuple_residue({3, 7}, -1), std::invalid_argument);
}

TEST_CASE("phi_sweep invariants") {
    for (int64_t c : {-1, 2, 5, 7}) {
        for (const PhiProfile& prof : phi_sweep(c, 3, 2000, -1)) {
            CHECK(prof.sign == -1);
            CHECK((prof.p * prof.p - 1) % prof.modulus == 0);
            CHECK(prof.residue == prof.p % prof.modulus);
        }
        for (const PhiProfile& prof : phi_sweep(c, 3, 2000, +1)) {
            CHECK(prof.sign == 1);
            CHECK((prof.p - 1) % prof.modulus == 0);
            if (prof.residue) {
                REQUIRE(prof.cofactor_residue.has_value());
                CHECK(*prof.residue ==
                      mulmod(prof.p % prof.modulus, *prof.cofactor_residue % prof.modulus,
                             prof.modulus));
                CHECK(std::gcd(*prof.alpha, *prof.beta) <= 2);
            }
        }
    }
    // sweep for c=7 over [3,4000] finds the two known admissible entries
    auto sweep = phi_sweep(7, 3, 4000, +1);
    int admissible = 0;
    bool has31 = false, has3923 = false;
    for (const PhiProfile& prof : sweep)
        if (prof.residue) {
            ++admissible;
            has31 |= prof.p == 31;
            has3923 |= prof.p == 3923;
        }
    CHECK(has31);
    CHECK(has3923);
    CHECK(admissible == 2);
}

TEST_SUITE_END();
