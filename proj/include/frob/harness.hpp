#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frob/frob_test.hpp"

namespace frob {

// Result of a range scan: every odd non-square n in [lo, hi) went through
// frobenius_test, and the verdict was compared against the primality oracle.
struct ScanReport {
    uint64_t lo = 0, hi = 0;
    uint64_t tested = 0; // odd non-square composites evaluated
    std::vector<uint64_t> fpp_hits;
    struct Disagreement {
        uint64_t n;
        bool frobenius_prime;
        bool oracle_prime;
        bool operator==(const Disagreement&) const = default;
    };
    std::vector<Disagreement> disagreements; // fpp_hits is a subset
    double elapsed_seconds = 0;
    int shards = 1;
};

// Deterministic: the report body (everything but elapsed/shards) does not
// depend on shard_count.
ScanReport scan_range(uint64_t lo, uint64_t hi, int shard_count);

struct ListCheckReport {
    std::string source;
    uint64_t entries = 0;
    uint64_t rejected_by_frobenius = 0;
    uint64_t skipped_invalid = 0; // passed but prime: not pseudoprime material
    uint64_t malformed_lines = 0;
    std::vector<uint64_t> passed; // composite and passing: FPP hits
};

// One ASCII decimal per LF-terminated line; CR tolerated and stripped;
// unparseable lines are counted malformed. Unreadable file throws
// std::runtime_error carrying the path.
ListCheckReport check_list(const std::string& path);

// Odd composites n < hi with base^(n-1) == 1 mod n for every listed base.
// progress = true emits a checkpoint line to stderr per completed block
// batch; meant for the flag-gated long-run jobs.
uint64_t count_fermat_pseudoprimes(uint64_t hi, const std::vector<uint64_t>& bases,
                                   int threads = 1, bool progress = false);

// Base-2 style pseudoprime generation for list checks: odd composites n < hi
// passing Fermat to every base (compositeness from a block sieve).
std::vector<uint64_t> fermat_pseudoprimes_below(uint64_t hi, const std::vector<uint64_t>& bases,
                                                int threads = 1);

struct PropositionConfig {
    std::vector<std::string> which = {"all"}; // scan, multiple, except-one,
                                              // phi-negative, triples, quadruples
    uint64_t scan_hi = 1'000'000;
    uint64_t multiple_p_max = 100'000;
    int64_t multiple_c_max = 128;
    uint64_t except_one_q_max = 200;
    std::vector<int64_t> except_one_indices = {-1, 2, 3, 5};
    uint64_t phi_negative_p_min = 1'000'000;
    uint64_t phi_negative_p_max = 1'000'100;
    uint64_t quadruple_bound = uint64_t{1} << 40;
    int threads = 1;
    bool long_run = false;
};

struct PropositionResult {
    std::string name;
    bool pass = false;
    uint64_t checked = 0; // numbers / candidates examined
    uint64_t violations = 0;
    std::string note = {};
};

struct PropositionReport {
    PropositionConfig config;
    std::vector<PropositionResult> results;
    double elapsed_seconds = 0;
    bool all_pass() const;
};

// Desk-scale reproduction of the computational propositions: direct scan,
// multiple-factor sweep, all-factors-except-one, Phi-negative candidate
// elimination, triple cofactor sweeps and quadruple multiples.
PropositionReport run_proposition_suite(const PropositionConfig& config);

// FNV-1a over the canonical JSON form of a config; part of every report.
std::string config_hash(const nlohmann::json& config);

nlohmann::json to_json(const ScanReport& report);
nlohmann::json to_json(const ListCheckReport& report);
nlohmann::json to_json(const PropositionReport& report);
nlohmann::json to_json(const PropositionConfig& config);

std::string to_text(const ScanReport& report);
std::string to_text(const ListCheckReport& report);
std::string to_text(const PropositionReport& report);

} // namespace frob
