#include "frob/harness.hpp"

#include <atomic>
#include <cinttypes>
#include <charconv>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "frob/exact_quad.hpp"
#include "frob/mont.hpp"
#include "frob/structure.hpp"
#include "frob/version.hpp"

namespace frob {

namespace {

constexpr uint64_t k_block_width = uint64_t{1} << 20;

// blocks covering [lo, hi); written to avoid wraparound near 2^64
inline uint64_t block_count(uint64_t lo, uint64_t hi) {
    return (hi - lo - 1) / k_block_width + 1;
}

// Runs fn(block_index, lo, hi) over contiguous blocks; results land in
// per-block slots, so the merged output is independent of the worker count.
template <typename Fn>
void for_blocks(uint64_t lo, uint64_t hi, int workers, Fn&& fn) {
    uint64_t count = block_count(lo, hi);
    std::atomic<uint64_t> next{0};
    auto drain = [&] {
        for (;;) {
            uint64_t i = next.fetch_add(1);
            if (i >= count) break;
            uint64_t blo = lo + i * k_block_width;
            uint64_t bhi = std::min(hi, blo + k_block_width);
            fn(i, blo, bhi);
        }
    };
    if (workers <= 1) {
        drain();
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
}

struct BlockScan {
    uint64_t tested = 0;
    std::vector<uint64_t> fpp_hits;
    std::vector<ScanReport::Disagreement> disagreements;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

ScanReport scan_range(uint64_t lo, uint64_t hi, int shard_count) {
    if (lo < 3 || lo >= hi) throw std::invalid_argument("scan_range: need 3 <= lo < hi");
    if (shard_count < 1) throw std::invalid_argument("scan_range: shard_count must be >= 1");
    auto start = std::chrono::steady_clock::now();

    uint64_t blocks = block_count(lo, hi);
    std::vector<BlockScan> slots(blocks);
    for_blocks(lo, hi, shard_count, [&](uint64_t i, uint64_t blo, uint64_t bhi) {
        BlockScan& slot = slots[i];
        for (uint64_t n = blo | 1; n < bhi; n += 2) {
            if (is_perfect_square(n)) continue;
            bool frob = frobenius_test(n).verdict == Verdict::FrobeniusPrime;
            bool oracle = is_prime(n);
            if (!oracle) ++slot.tested;
            if (frob != oracle) {
                slot.disagreements.push_back({n, frob, oracle});
                if (frob && !oracle) slot.fpp_hits.push_back(n);
            }
        }
    });

    ScanReport report;
    report.lo = lo;
    report.hi = hi;
    report.shards = shard_count;
    for (const BlockScan& slot : slots) {
        report.tested += slot.tested;
        report.fpp_hits.insert(report.fpp_hits.end(), slot.fpp_hits.begin(), slot.fpp_hits.end());
        report.disagreements.insert(report.disagreements.end(), slot.disagreements.begin(),
                                    slot.disagreements.end());
    }
    report.elapsed_seconds = seconds_since(start);
    return report;
}

ListCheckReport check_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("check_list: cannot open " + path);
    ListCheckReport report;
    report.source = path;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        uint64_t n = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), n);
        if (ec != std::errc{} || ptr != line.data() + line.size() || line.empty()) {
            ++report.malformed_lines;
            continue;
        }
        ++report.entries;
        if (frobenius_test(n).verdict != Verdict::FrobeniusPrime) {
            ++report.rejected_by_frobenius;
        } else if (is_prime(n)) {
            ++report.skipped_invalid;
        } else {
            report.passed.push_back(n);
        }
    }
    return report;
}

namespace {

// Odd-only composite flags for [lo, hi), via the base primes <= sqrt(hi).
void sieve_block(uint64_t lo, uint64_t hi, const std::vector<uint64_t>& base_primes,
                 std::vector<bool>& composite) {
    composite.assign((hi - lo + 1) / 2, false); // slot k = lo_odd + 2k
    uint64_t lo_odd = lo | 1;
    for (uint64_t p : base_primes) {
        if (p * p >= hi) break;
        uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        if ((start & 1) == 0) start += p; // odd multiples only
        for (uint64_t m = start; m < hi; m += 2 * p)
            if (m >= lo_odd) composite[(m - lo_odd) / 2] = true;
    }
}

std::vector<uint64_t> base_primes_for(uint64_t hi) {
    uint64_t root = 2;
    while (root * root < hi) ++root;
    std::vector<bool> sieve(root + 1, true);
    std::vector<uint64_t> primes;
    for (uint64_t i = 3; i <= root; i += 2) {
        if (!sieve[i]) continue;
        primes.push_back(i);
        for (uint64_t j = i * i; j <= root; j += 2 * i) sieve[j] = false;
    }
    return primes;
}

bool fermat_all_bases(uint64_t n, const std::vector<uint64_t>& bases) {
    detail::Mont m(n);
    for (uint64_t b : bases) {
        uint64_t r = b % n;
        if (r == 0 || std::gcd(r, n) != 1) return false;
        if (m.pow(m.to(r), n - 1) != m.one()) return false;
    }
    return true;
}

} // namespace

std::vector<uint64_t> fermat_pseudoprimes_below(uint64_t hi, const std::vector<uint64_t>& bases,
                                                int threads) {
    if (hi < 10) return {};
    const std::vector<uint64_t> base_primes = base_primes_for(hi);
    uint64_t blocks = block_count(9, hi);
    std::vector<std::vector<uint64_t>> slots(blocks);
    for_blocks(9, hi, threads, [&](uint64_t i, uint64_t blo, uint64_t bhi) {
        std::vector<bool> composite;
        sieve_block(blo, bhi, base_primes, composite);
        uint64_t lo_odd = blo | 1;
        for (uint64_t n = lo_odd; n < bhi; n += 2) {
            if (!composite[(n - lo_odd) / 2]) continue;
            if (fermat_all_bases(n, bases)) slots[i].push_back(n);
        }
    });
    std::vector<uint64_t> out;
    for (auto& slot : slots) out.insert(out.end(), slot.begin(), slot.end());
    return out;
}

uint64_t count_fermat_pseudoprimes(uint64_t hi, const std::vector<uint64_t>& bases, int threads,
                                   bool progress) {
    if (hi < 10) return 0;
    const std::vector<uint64_t> base_primes = base_primes_for(hi);
    const uint64_t blocks = block_count(9, hi);
    std::atomic<uint64_t> total{0}, done{0};
    for_blocks(9, hi, threads, [&](uint64_t, uint64_t blo, uint64_t bhi) {
        std::vector<bool> composite;
        sieve_block(blo, bhi, base_primes, composite);
        uint64_t lo_odd = blo | 1;
        uint64_t count = 0;
        for (uint64_t n = lo_odd; n < bhi; n += 2) {
            if (!composite[(n - lo_odd) / 2]) continue;
            if (fermat_all_bases(n, bases)) ++count;
        }
        total += count;
        uint64_t finished = done.fetch_add(1) + 1;
        if (progress && (finished % 64 == 0 || finished == blocks))
            std::fprintf(stderr, "count-psp checkpoint: %" PRIu64 "/%" PRIu64
                                 " blocks, %" PRIu64 " hits\n",
                         finished, blocks, total.load());
    });
    return total.load();
}

bool PropositionReport::all_pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

namespace {

bool selected(const PropositionConfig& config, const std::string& name) {
    for (const std::string& w : config.which)
        if (w == "all" || w == name) return true;
    return false;
}

PropositionResult prop_scan(const PropositionConfig& config) {
    PropositionResult res{.name = "scan"};
    ScanReport scan = scan_range(3, config.scan_hi, config.threads);
    res.checked = scan.tested;
    res.violations = scan.disagreements.size();
    res.pass = scan.disagreements.empty();
    res.note = "no counterexample and full oracle agreement on [3, " +
               std::to_string(config.scan_hi) + ")";
    return res;
}

PropositionResult prop_multiple(const PropositionConfig& config) {
    PropositionResult res{.name = "multiple"};
    uint64_t weak = 0, vacuous = 0;
    for (uint64_t p = 3; p <= config.multiple_p_max; p += 2) {
        if (!is_prime(p)) continue;
        if (jacobi(-1, p) == -1) {
            ++res.checked;
            auto check = multiple_factor_check(p, -1);
            if (check.frobenius_holds) ++res.violations;
            if (check.norm_fermat_holds) ++weak;
        }
        for (uint64_t c : detail::small_primes()) {
            if (static_cast<int64_t>(c) >= config.multiple_c_max) break;
            if (jacobi_unsigned(c, p) != -1) continue;
            ++res.checked;
            auto check = multiple_factor_check(p, static_cast<int64_t>(c));
            if (check.frobenius_holds) {
                // p < c cannot divide an n of index c (J(p/n) would be 0):
                // such a hit is vacuous for the proposition
                if (p < c)
                    ++vacuous;
                else
                    ++res.violations;
            }
            if (check.norm_fermat_holds) ++weak;
        }
    }
    res.pass = res.violations == 0;
    res.note = "full condition never holds for p > c; vacuous p < c hits: " +
               std::to_string(vacuous) + ", weak norm condition hits: " + std::to_string(weak) +
               " (Wieferich-style primes)";
    return res;
}

PropositionResult prop_except_one(const PropositionConfig& config) {
    PropositionResult res{.name = "except-one"};
    uint64_t composite_passing = 0;
    for (int64_t c : config.except_one_indices) {
        ExceptOneScan scan = factors_except_one_scan(c, config.except_one_q_max, std::nullopt,
                                                     config.threads);
        for (const ExceptOneRow& row : scan.rows) res.checked += row.candidates.size();
        composite_passing += scan.composite_passing;
    }
    res.violations = composite_passing;
    res.pass = composite_passing == 0;
    res.note = "only prime n = q*p satisfy the relation";
    return res;
}

PropositionResult prop_phi_negative(const PropositionConfig& config) {
    PropositionResult res{.name = "phi-negative"};
    for (uint64_t p = config.phi_negative_p_min | 1; p <= config.phi_negative_p_max; p += 2) {
        if (!is_prime(p) || jacobi(-1, p) != -1) continue;
        auto [a, b] = standard_base(-1);
        for (uint64_t n : phi_negative_candidates(p, -1, ~uint64_t{0})) {
            ++res.checked;
            if ((n & 1) == 0 || is_perfect_square(n)) continue; // not test material
            if (raw_frobenius_relation(n, a, b, -1) && !is_prime(n)) ++res.violations;
        }
    }
    res.pass = res.violations == 0;
    res.note = "candidate multiples p(1+kQ_p) below 2^64 all rejected";
    return res;
}

struct TripleCase {
    int64_t c;
    std::vector<uint64_t> primes;
};

const std::vector<TripleCase>& listed_triples() {
    static const std::vector<TripleCase> triples = {
        {5, {13, 37, 433}}, {5, {13, 37, 97}}, {-1, {11, 47, 71}}, {-1, {7, 19, 79}},
    };
    return triples;
}

const std::vector<TripleCase>& listed_quadruples() {
    static const std::vector<TripleCase> quads = {
        {2, {29, 53, 157, 197}},
        {2, {5, 53, 157, 197}},
        {5, {13, 37, 97, 433}},
        {-1, {7, 19, 79, 1999}},
        {-1, {7, 19, 79, 919}},
        {-1, {7, 19, 79, 859}},
        {-1, {7, 19, 79, 739}},
        {-1, {7, 19, 79, 619}},
        {-1, {7, 19, 79, 599}},
        {-1, {7, 19, 79, 499}},
        {-1, {7, 19, 79, 487}},
        {-1, {7, 19, 79, 439}},
        {-1, {7, 19, 79, 199}},
        {-1, {7, 19, 199, 1999}},
        {-1, {7, 19, 199, 859}},
        {-1, {7, 19, 199, 599}},
        {-1, {7, 19, 199, 499}},
        {-1, {7, 19, 199, 487}},
        {-1, {11, 47, 71, 691}},
        {-1, {11, 47, 71, 431}},
        {-1, {19, 31, 79, 1279}},
        {-1, {31, 79, 139, 599}},
    };
    return quads;
}

PropositionResult prop_triples(const PropositionConfig& config) {
    PropositionResult res{.name = "triples"};
    for (const TripleCase& tc : listed_triples()) {
        // every pair of a listed triple must be consistent
        for (size_t i = 0; i < tc.primes.size(); ++i)
            for (size_t j = i + 1; j < tc.primes.size(); ++j) {
                ++res.checked;
                if (!pair_consistent(tc.primes[i], tc.primes[j], tc.c)) ++res.violations;
            }
        TupleResult tuple = tuple_residue(tc.primes, tc.c);
        ++res.checked;
        if (!tuple.constraint) {
            ++res.violations;
            continue;
        }
        // cofactor residue sweep: n = P*q <= bound with q in the merged class
        mpz_class product = 1;
        for (uint64_t p : tc.primes) product *= p;
        auto [abase, bbase] = standard_base(tc.c);
        for (mpz_class q = tuple.constraint->residue == 0 ? tuple.constraint->modulus
                                                          : tuple.constraint->residue;
             ; q += tuple.constraint->modulus) {
            mpz_class n = product * q;
            if (n > config.quadruple_bound) break;
            ++res.checked;
            if (!n.fits_ulong_p()) break;
            uint64_t n64 = n.get_ui();
            if (is_perfect_square(n64)) continue;
            if (raw_frobenius_relation(n64, abase, bbase, tc.c) && !is_prime(n64))
                ++res.violations;
        }
    }
    res.pass = res.violations == 0;
    res.note = "listed triples: pairwise consistent, constraint exists, sweep clean";
    return res;
}

PropositionResult prop_quadruples(const PropositionConfig& config) {
    PropositionResult res{.name = "quadruples"};
    for (const TripleCase& qc : listed_quadruples()) {
        uint64_t product = 1;
        for (uint64_t p : qc.primes) product *= p;
        auto [abase, bbase] = standard_base(qc.c);
        for (uint64_t m = 1;; m += 2) {
            detail::u128 n = static_cast<detail::u128>(product) * m;
            if (n > config.quadruple_bound) break;
            uint64_t n64 = static_cast<uint64_t>(n);
            ++res.checked;
            if (raw_frobenius_relation(n64, abase, bbase, qc.c)) ++res.violations;
        }
    }
    res.pass = res.violations == 0;
    res.note = "all odd multiples of the listed quadruple products rejected";
    return res;
}

} // namespace

PropositionReport run_proposition_suite(const PropositionConfig& config) {
    auto start = std::chrono::steady_clock::now();
    PropositionReport report;
    report.config = config;
    if (selected(config, "scan")) report.results.push_back(prop_scan(config));
    if (selected(config, "multiple")) report.results.push_back(prop_multiple(config));
    if (selected(config, "except-one")) report.results.push_back(prop_except_one(config));
    if (selected(config, "phi-negative")) report.results.push_back(prop_phi_negative(config));
    if (selected(config, "triples")) report.results.push_back(prop_triples(config));
    if (selected(config, "quadruples")) report.results.push_back(prop_quadruples(config));
    report.elapsed_seconds = seconds_since(start);
    return report;
}

std::string config_hash(const nlohmann::json& config) {
    const std::string dump = config.dump();
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

nlohmann::json to_json(const ScanReport& report) {
    nlohmann::json j;
    j["version"] = k_version;
    j["range"] = {report.lo, report.hi};
    j["tested"] = report.tested;
    j["fpp_hits"] = report.fpp_hits;
    j["disagreements"] = nlohmann::json::array();
    for (const auto& d : report.disagreements)
        j["disagreements"].push_back({{"n", d.n},
                                      {"frobenius_prime", d.frobenius_prime},
                                      {"oracle_prime", d.oracle_prime}});
    j["elapsed_seconds"] = report.elapsed_seconds;
    j["shards"] = report.shards;
    j["config_hash"] = config_hash(nlohmann::json{{"lo", report.lo}, {"hi", report.hi}});
    return j;
}

nlohmann::json to_json(const ListCheckReport& report) {
    nlohmann::json j;
    j["version"] = k_version;
    j["source"] = report.source;
    j["entries"] = report.entries;
    j["rejected_by_frobenius"] = report.rejected_by_frobenius;
    j["skipped_invalid"] = report.skipped_invalid;
    j["malformed_lines"] = report.malformed_lines;
    j["passed"] = report.passed;
    j["config_hash"] = config_hash(nlohmann::json{{"source", report.source}});
    return j;
}

nlohmann::json to_json(const PropositionConfig& config) {
    nlohmann::json j;
    j["which"] = config.which;
    j["scan_hi"] = config.scan_hi;
    j["multiple_p_max"] = config.multiple_p_max;
    j["multiple_c_max"] = config.multiple_c_max;
    j["except_one_q_max"] = config.except_one_q_max;
    j["except_one_indices"] = config.except_one_indices;
    j["phi_negative_p_min"] = config.phi_negative_p_min;
    j["phi_negative_p_max"] = config.phi_negative_p_max;
    j["quadruple_bound"] = config.quadruple_bound;
    j["threads"] = config.threads;
    j["long_run"] = config.long_run;
    return j;
}

nlohmann::json to_json(const PropositionReport& report) {
    nlohmann::json j;
    j["version"] = k_version;
    j["config"] = to_json(report.config);
    j["config_hash"] = config_hash(to_json(report.config));
    j["results"] = nlohmann::json::array();
    for (const auto& r : report.results)
        j["results"].push_back({{"name", r.name},
                                {"pass", r.pass},
                                {"checked", r.checked},
                                {"violations", r.violations},
                                {"note", r.note}});
    j["elapsed_seconds"] = report.elapsed_seconds;
    j["all_pass"] = report.all_pass();
    return j;
}

std::string to_text(const ScanReport& report) {
    std::ostringstream out;
    out << "scan [" << report.lo << ", " << report.hi << ")  version " << k_version
        << "  config " << config_hash(nlohmann::json{{"lo", report.lo}, {"hi", report.hi}})
        << "\n"
        << "  tested (odd non-square composites): " << report.tested << "\n"
        << "  fpp hits:                           " << report.fpp_hits.size() << "\n"
        << "  oracle disagreements:               " << report.disagreements.size() << "\n"
        << "  shards: " << report.shards << "   elapsed: " << report.elapsed_seconds << " s\n";
    for (uint64_t n : report.fpp_hits) out << "  FPP: " << n << "\n";
    return out.str();
}

std::string to_text(const ListCheckReport& report) {
    std::ostringstream out;
    out << "list check " << report.source << "  version " << k_version << "  config "
        << config_hash(nlohmann::json{{"source", report.source}}) << "\n"
        << "  entries:               " << report.entries << "\n"
        << "  rejected by frobenius: " << report.rejected_by_frobenius << "\n"
        << "  skipped (prime):       " << report.skipped_invalid << "\n"
        << "  malformed lines:       " << report.malformed_lines << "\n"
        << "  passed (FPP hits):     " << report.passed.size() << "\n";
    for (uint64_t n : report.passed) out << "  FPP: " << n << "\n";
    return out.str();
}

std::string to_text(const PropositionReport& report) {
    std::ostringstream out;
    out << "proposition suite  version " << k_version << "  config "
        << config_hash(to_json(report.config)) << "  elapsed " << report.elapsed_seconds
        << " s\n";
    for (const auto& r : report.results)
        out << "  " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  checked=" << r.checked
            << " violations=" << r.violations << "  (" << r.note << ")\n";
    return out.str();
}

} // namespace frob
