#include "frob/exact_quad.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <thread>

#include "frob/frob_test.hpp"
#include "frob/quad_ring.hpp"

namespace frob {

BigQuadInt exact_pow(int64_t a, int64_t b, int64_t c, uint64_t q) {
    if (q == 0) throw std::invalid_argument("exact_pow: exponent must be >= 1");
    mpz_class ra = a, rb = b, t1, t2;
    int top = 63;
    while (top > 0 && !((q >> top) & 1)) --top;
    for (int i = top - 1; i >= 0; --i) {
        // (ra, rb) <- (ra^2 + c rb^2, 2 ra rb)
        t1 = ra * ra;
        t2 = rb * rb;
        t2 *= c;
        rb *= ra;
        rb <<= 1;
        ra = t1 + t2;
        if ((q >> i) & 1) {
            t1 = ra * a;
            t2 = rb * b;
            t2 *= c;
            rb *= a;
            rb += ra * b;
            ra = t1 + t2;
        }
    }
    return {std::move(ra), std::move(rb), c};
}

mpz_class cofactor_divisor_gcd(uint64_t q, int64_t a, int64_t b, int64_t c) {
    if (q == 0 || (q & 1) == 0)
        throw std::invalid_argument("cofactor_divisor_gcd: q must be odd and positive");
    int j = jacobi(c, q);
    if (j == 0) {
        uint64_t mag = c < 0 ? static_cast<uint64_t>(-c) : static_cast<uint64_t>(c);
        throw trivial_factor_error(std::gcd(mag, q), "cofactor_divisor_gcd: J(c/q) = 0");
    }
    BigQuadInt zq = exact_pow(a, b, c, q);
    mpz_class da = zq.a - a;
    mpz_class db = j == 1 ? mpz_class(zq.b - b) : mpz_class(zq.b + b);
    mpz_class d;
    mpz_gcd(d.get_mpz_t(), da.get_mpz_t(), db.get_mpz_t());
    return d;
}

bool frobenius_relation_big(const mpz_class& n, const mpz_class& a, const mpz_class& b, int64_t c) {
    if (n < 3 || mpz_even_p(n.get_mpz_t()))
        throw std::invalid_argument("frobenius_relation_big: n must be odd and >= 3");
    mpz_class cr = mpz_class(c) % n;
    if (cr < 0) cr += n;
    mpz_class za = a % n, zb = b % n;
    if (za < 0) za += n;
    if (zb < 0) zb += n;
    mpz_class ra = 1, rb = 0, t1, t2, t3;
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        t1 = ra * ra + cr * (rb * rb);
        t2 = (ra * rb) << 1;
        ra = t1 % n;
        rb = t2 % n;
        if (mpz_tstbit(n.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            t1 = ra * za + cr * (rb * zb);
            t2 = ra * zb + rb * za;
            ra = t1 % n;
            rb = t2 % n;
        }
    }
    mpz_class conj_b = zb == 0 ? mpz_class(0) : mpz_class(n - zb);
    return ra == za && rb == conj_b;
}

namespace {

// Primes <= 10^6 packed into product chunks: one gcd per chunk tells
// whether any of its primes divides D before trial-dividing.
struct PrimeChunks {
    std::vector<std::vector<uint32_t>> primes;
    std::vector<mpz_class> products;
};

const PrimeChunks& prime_chunks() {
    static const PrimeChunks chunks = [] {
        constexpr uint32_t limit = 1'000'000;
        std::vector<bool> sieve(limit + 1, true);
        PrimeChunks out;
        std::vector<uint32_t> current;
        mpz_class product = 1;
        for (uint32_t i = 2; i <= limit; ++i) {
            if (!sieve[i]) continue;
            for (uint64_t j = static_cast<uint64_t>(i) * i; j <= limit; j += i) sieve[j] = false;
            current.push_back(i);
            product *= i;
            if (current.size() == 4096) {
                out.primes.push_back(std::move(current));
                out.products.push_back(std::move(product));
                current.clear();
                product = 1;
            }
        }
        if (!current.empty()) {
            out.primes.push_back(std::move(current));
            out.products.push_back(std::move(product));
        }
        return out;
    }();
    return chunks;
}

// Strips every prime <= 10^6 from d, appending (prime, exponent) to out.
void strip_small_primes(mpz_class& d, std::vector<std::pair<uint64_t, int>>& out) {
    const PrimeChunks& chunks = prime_chunks();
    mpz_class g, r;
    for (size_t k = 0; k < chunks.primes.size() && d > 1; ++k) {
        r = chunks.products[k] % d;
        mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), d.get_mpz_t());
        if (g == 1) continue;
        for (uint32_t p : chunks.primes[k]) {
            if (d == 1) break;
            int e = 0;
            while (mpz_divisible_ui_p(d.get_mpz_t(), p)) {
                mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p);
                ++e;
            }
            if (e) out.emplace_back(p, e);
        }
    }
}

} // namespace

DivisorFactors factor_divisor(const mpz_class& d) {
    DivisorFactors out;
    mpz_class rest = d;
    std::vector<std::pair<uint64_t, int>> small;
    strip_small_primes(rest, small);
    for (auto [p, e] : small) out.primes.emplace_back(p);
    if (rest > 1) {
        if (rest.fits_ulong_p()) {
            for (auto [p, e] : factorize(rest.get_ui()).factors) out.primes.emplace_back(p);
        } else if (mpz_probab_prime_p(rest.get_mpz_t(), 32)) {
            out.primes.push_back(rest);
        } else {
            out.unresolved = true;
            out.unresolved_cofactor = rest;
        }
    }
    std::sort(out.primes.begin(), out.primes.end());
    return out;
}

namespace {

ExceptOneRow scan_one_q(int64_t c, uint64_t q, int64_t a, int64_t b,
                        const std::optional<mpz_class>& n_bound) {
    ExceptOneRow row;
    row.q = q;
    mpz_class d = cofactor_divisor_gcd(q, a, b, c);
    row.d_bits = d == 0 ? 0 : mpz_sizeinbase(d.get_mpz_t(), 2);

    DivisorFactors df = factor_divisor(d);
    row.unresolved = df.unresolved;
    row.unresolved_cofactor = df.unresolved_cofactor;

    for (const mpz_class& p : df.primes) {
        ExceptOneCandidate cand;
        cand.p = p;
        mpz_class n = p * q;
        if (mpz_even_p(n.get_mpz_t())) {
            cand.skipped = true;
            cand.skip_reason = "even";
        } else if (mpz_perfect_square_p(n.get_mpz_t())) {
            cand.skipped = true;
            cand.skip_reason = "square";
        } else if (n_bound && n > *n_bound) {
            cand.skipped = true;
            cand.skip_reason = "beyond-bound";
        } else if (n.fits_ulong_p()) {
            uint64_t n64 = n.get_ui();
            cand.relation_holds = raw_frobenius_relation(n64, static_cast<uint64_t>(a),
                                                         static_cast<uint64_t>(b), c);
            cand.n_prime = is_prime(n64);
        } else {
            cand.relation_holds = frobenius_relation_big(n, a, b, c);
            cand.n_prime = mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
        }
        row.candidates.push_back(std::move(cand));
    }
    return row;
}

} // namespace

ExceptOneScan factors_except_one_scan(int64_t c, uint64_t q_max,
                                      const std::optional<mpz_class>& n_bound, int threads) {
    auto [a, b] = standard_base(c);
    ExceptOneScan scan;
    scan.c = c;
    scan.q_max = q_max;

    if (threads < 1) threads = 1;
    std::vector<std::vector<ExceptOneRow>> buckets(threads);
    std::atomic<uint64_t> next{3};
    auto worker = [&](int id) {
        for (;;) {
            uint64_t q = next.fetch_add(2);
            if (q > q_max) break;
            if (jacobi(c, q) == 0) continue;
            buckets[id].push_back(scan_one_q(c, q, static_cast<int64_t>(a),
                                             static_cast<int64_t>(b), n_bound));
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (auto& bucket : buckets)
        scan.rows.insert(scan.rows.end(), std::make_move_iterator(bucket.begin()),
                         std::make_move_iterator(bucket.end()));
    std::sort(scan.rows.begin(), scan.rows.end(),
              [](const ExceptOneRow& x, const ExceptOneRow& y) { return x.q < y.q; });

    for (const ExceptOneRow& row : scan.rows)
        for (const ExceptOneCandidate& cand : row.candidates)
            if (cand.relation_holds) {
                scan.passing.emplace_back(row.q, cand.p);
                if (!cand.n_prime) ++scan.composite_passing;
            }
    return scan;
}

std::string except_one_csv(const ExceptOneScan& scan) {
    std::ostringstream out;
    out << "q,d_bits,p,verdict\n";
    for (const ExceptOneRow& row : scan.rows) {
        if (row.candidates.empty() && !row.unresolved)
            out << row.q << ',' << row.d_bits << ",,no-candidates\n";
        for (const ExceptOneCandidate& cand : row.candidates) {
            const char* verdict = cand.skipped          ? cand.skip_reason.c_str()
                                  : !cand.relation_holds ? "rejected"
                                  : cand.n_prime         ? "prime-pass"
                                                         : "COMPOSITE-PASS";
            out << row.q << ',' << row.d_bits << ',' << cand.p.get_str() << ',' << verdict << '\n';
        }
        if (row.unresolved)
            out << row.q << ',' << row.d_bits << ',' << row.unresolved_cofactor.get_str()
                << ",unresolved\n";
    }
    return out.str();
}

} // namespace frob
