// frob: Frobenius primality test toolbox.
//
// Subcommands: test, index, scan, check-list, phi, pairs, except-one,
// props, count-psp. Output as human text, JSON or CSV; exit codes are part
// of the interface (0 pass/prime, 1 composite or finding, 2 invalid input).

#include <cinttypes>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "frob/exact_quad.hpp"
#include "frob/harness.hpp"
#include "frob/structure.hpp"
#include "frob/version.hpp"

using nlohmann::json;

namespace {

constexpr uint64_t k_wide_range = 1'000'000'000;

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << payload;
}

std::string verdict_line(const frob::TestOutcome& outcome) {
    using frob::CompositeReason;
    using frob::Verdict;
    switch (outcome.verdict) {
        case Verdict::FrobeniusPrime:
            if (outcome.diagnostics)
                return "frobenius-prime c=" + std::to_string(outcome.diagnostics->index);
            return "frobenius-prime";
        case Verdict::FactorFound:
            return "composite (factor " + std::to_string(*outcome.divisor) + ")";
        case Verdict::Composite:
            switch (outcome.reason) {
                case CompositeReason::Even:
                    return "composite (even)";
                case CompositeReason::Square:
                    return outcome.divisor
                               ? "composite (square, root " + std::to_string(*outcome.divisor) +
                                     ")"
                               : "composite (square)";
                default:
                    return outcome.diagnostics ? "composite (frobenius equality failed, c=" +
                                                     std::to_string(outcome.diagnostics->index) +
                                                     ")"
                                               : "composite";
            }
    }
    return "composite";
}

json outcome_json(uint64_t n, const frob::TestOutcome& outcome) {
    json j;
    j["version"] = frob::k_version;
    j["n"] = n;
    j["verdict"] = outcome.verdict == frob::Verdict::FrobeniusPrime ? "frobenius-prime"
                   : outcome.verdict == frob::Verdict::FactorFound  ? "factor-found"
                                                                    : "composite";
    if (outcome.divisor) j["divisor"] = *outcome.divisor;
    if (outcome.diagnostics) {
        j["index"] = outcome.diagnostics->index;
        j["base"] = {outcome.diagnostics->base.a, outcome.diagnostics->base.b};
        j["residue"] = {outcome.diagnostics->final.a, outcome.diagnostics->final.b};
    }
    return j;
}

std::string phi_csv(const std::vector<frob::PhiProfile>& profiles) {
    std::string out = "c,p,sign,M,D,admissible\n";
    for (const auto& prof : profiles) {
        out += std::to_string(prof.c) + ',' + std::to_string(prof.p) + ',' +
               (prof.sign > 0 ? "+" : "-") + ',' + std::to_string(prof.modulus) + ',';
        if (prof.residue) out += std::to_string(*prof.residue);
        out += ',';
        out += prof.residue ? "yes" : "no";
        out += '\n';
    }
    return out;
}

json phi_json(const std::vector<frob::PhiProfile>& profiles) {
    json arr = json::array();
    for (const auto& prof : profiles) {
        json j{{"c", prof.c},
               {"p", prof.p},
               {"sign", prof.sign},
               {"M", prof.modulus},
               {"admissible", prof.residue.has_value()}};
        if (prof.residue) j["D"] = *prof.residue;
        if (prof.cofactor_residue) j["A"] = *prof.cofactor_residue;
        arr.push_back(std::move(j));
    }
    return arr;
}

int run(int argc, char** argv) {
    CLI::App app{"Frobenius primality test toolbox"};
    app.set_version_flag("--version", frob::k_version);
    app.require_subcommand(1);

    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    std::string output = "text";
    std::string out_path;
    bool long_run = false;
    uint64_t seed = 0; // reserved; every algorithm is deterministic
    app.add_option("--threads", threads, "worker threads")->capture_default_str();
    app.add_option("--output", output, "text|json|csv")->capture_default_str();
    app.add_option("--out", out_path, "write the report to a file");
    app.add_flag("--long-run", long_run, "permit hour-scale parameter ranges");
    app.add_option("--seed", seed, "reserved, no effect")->group("");

    auto subcommand = [&](const char* name, const char* help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough(); // global flags may follow the subcommand
        return sub;
    };

    auto* cmd_test = subcommand("test", "Frobenius primality test for one number");
    uint64_t test_n = 0;
    cmd_test->add_option("n", test_n, "odd number to test")->required();

    auto* cmd_index = subcommand("index", "Frobenius index of an odd non-square");
    uint64_t index_n = 0;
    cmd_index->add_option("n", index_n)->required();

    auto* cmd_scan = subcommand("scan", "scan a range for counterexamples");
    uint64_t scan_lo = 0, scan_hi = 0;
    cmd_scan->add_option("lo", scan_lo)->required();
    cmd_scan->add_option("hi", scan_hi)->required();

    auto* cmd_check = subcommand("check-list", "run a pseudoprime list through the test");
    std::string list_path;
    cmd_check->add_option("path", list_path)->required();

    auto* cmd_phi = subcommand("phi", "structural profiles of candidate prime factors");
    int64_t phi_c = -1;
    uint64_t phi_pmin = 3, phi_pmax = 1000;
    std::string phi_sign = "both";
    cmd_phi->add_option("--c", phi_c, "radicand / Frobenius index")->required();
    cmd_phi->add_option("--p-max", phi_pmax)->required();
    cmd_phi->add_option("--p-min", phi_pmin)->capture_default_str();
    cmd_phi->add_option("--sign", phi_sign, "+|-|both")->capture_default_str();

    auto* cmd_pairs = subcommand("pairs", "consistent prime pairs below a bound");
    int64_t pairs_c = -1;
    uint64_t pairs_pmax = 500;
    bool pairs_all = false;
    cmd_pairs->add_option("--c", pairs_c)->required();
    cmd_pairs->add_option("--p-max", pairs_pmax)->required();
    cmd_pairs->add_flag("--all", pairs_all, "also list inconsistent/inadmissible pairs");

    auto* cmd_except = subcommand("except-one", "all-factors-except-one search");
    int64_t except_c = -1;
    uint64_t except_qmax = 200;
    std::string except_bound;
    cmd_except->add_option("--c", except_c)->required();
    cmd_except->add_option("--q-max", except_qmax)->required();
    cmd_except->add_option("--n-bound", except_bound, "skip candidates with q*p above this");

    auto* cmd_props = subcommand("props", "desk-scale proposition suite");
    frob::PropositionConfig props_config;
    cmd_props->add_option("--which", props_config.which,
                          "scan|multiple|except-one|phi-negative|triples|quadruples|all")
        ->capture_default_str();
    cmd_props->add_option("--scan-hi", props_config.scan_hi)->capture_default_str();
    cmd_props->add_option("--multiple-p-max", props_config.multiple_p_max)->capture_default_str();
    cmd_props->add_option("--q-max", props_config.except_one_q_max)->capture_default_str();
    cmd_props->add_option("--phi-p-min", props_config.phi_negative_p_min)->capture_default_str();
    cmd_props->add_option("--phi-p-max", props_config.phi_negative_p_max)->capture_default_str();
    cmd_props->add_option("--bound", props_config.quadruple_bound)->capture_default_str();

    auto* cmd_count = subcommand("count-psp", "count Fermat pseudoprimes below a bound");
    uint64_t count_hi = 0;
    std::vector<uint64_t> count_bases{2};
    cmd_count->add_option("--hi", count_hi)->required();
    cmd_count->add_option("--bases", count_bases, "Fermat bases, all must pass")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cmd_test->parsed()) {
        frob::TestOutcome outcome = frob::frobenius_test(test_n);
        if (output == "json")
            emit(outcome_json(test_n, outcome).dump(2), out_path);
        else
            emit(verdict_line(outcome), out_path);
        return outcome.verdict == frob::Verdict::FrobeniusPrime ? 0 : 1;
    }

    if (cmd_index->parsed()) {
        try {
            emit(std::to_string(frob::frobenius_index(index_n)), out_path);
        } catch (const frob::not_applicable& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
        return 0;
    }

    if (cmd_scan->parsed()) {
        if (scan_lo >= scan_hi || scan_lo < 3) {
            std::cerr << "error: need 3 <= lo < hi\n";
            return 2;
        }
        if (scan_hi - scan_lo > k_wide_range && !long_run) {
            std::cerr << "error: range wider than 10^9; pass --long-run to confirm\n";
            return 2;
        }
        frob::ScanReport report = frob::scan_range(scan_lo, scan_hi, threads);
        emit(output == "json" ? to_json(report).dump(2) : to_text(report), out_path);
        return report.fpp_hits.empty() ? 0 : 1;
    }

    if (cmd_check->parsed()) {
        frob::ListCheckReport report = frob::check_list(list_path);
        emit(output == "json" ? to_json(report).dump(2) : to_text(report), out_path);
        return report.passed.empty() ? 0 : 1;
    }

    if (cmd_phi->parsed()) {
        std::vector<frob::PhiProfile> profiles;
        if (phi_sign == "+" || phi_sign == "both") {
            auto pos = frob::phi_sweep(phi_c, phi_pmin, phi_pmax, +1);
            profiles.insert(profiles.end(), pos.begin(), pos.end());
        }
        if (phi_sign == "-" || phi_sign == "both") {
            auto neg = frob::phi_sweep(phi_c, phi_pmin, phi_pmax, -1);
            profiles.insert(profiles.end(), neg.begin(), neg.end());
        }
        if (phi_sign != "+" && phi_sign != "-" && phi_sign != "both") {
            std::cerr << "error: --sign must be +, - or both\n";
            return 2;
        }
        std::sort(profiles.begin(), profiles.end(),
                  [](const auto& x, const auto& y) { return x.p < y.p; });
        emit(output == "json" ? phi_json(profiles).dump(2) : phi_csv(profiles), out_path);
        return 0;
    }

    if (cmd_pairs->parsed()) {
        std::vector<frob::PhiProfile> profiles;
        for (int sign : {+1, -1}) {
            auto part = frob::phi_sweep(pairs_c, 3, pairs_pmax, sign);
            profiles.insert(profiles.end(), part.begin(), part.end());
        }
        std::sort(profiles.begin(), profiles.end(),
                  [](const auto& x, const auto& y) { return x.p < y.p; });
        std::string csv = "c,p1,p2,verdict\n";
        json arr = json::array();
        for (size_t i = 0; i < profiles.size(); ++i)
            for (size_t j = i + 1; j < profiles.size(); ++j) {
                const auto &a = profiles[i], &b = profiles[j];
                const char* verdict;
                if (!a.residue || !b.residue)
                    verdict = "inadmissible";
                else {
                    uint64_t g = std::gcd(a.modulus, b.modulus);
                    verdict = (*a.residue % g) == (*b.residue % g) ? "consistent"
                                                                   : "inconsistent";
                }
                if (!pairs_all && std::string_view(verdict) != "consistent") continue;
                csv += std::to_string(pairs_c) + ',' + std::to_string(a.p) + ',' +
                       std::to_string(b.p) + ',' + verdict + '\n';
                arr.push_back({{"c", pairs_c}, {"p1", a.p}, {"p2", b.p}, {"verdict", verdict}});
            }
        emit(output == "json" ? arr.dump(2) : csv, out_path);
        return 0;
    }

    if (cmd_except->parsed()) {
        if (except_qmax > 10000 && !long_run) {
            std::cerr << "error: q-max above 10^4 is an hour-scale job; pass --long-run\n";
            return 2;
        }
        std::optional<mpz_class> bound;
        if (!except_bound.empty()) bound = mpz_class(except_bound);
        frob::ExceptOneScan scan =
            frob::factors_except_one_scan(except_c, except_qmax, bound, threads);
        if (output == "json") {
            json j{{"version", frob::k_version},
                   {"c", scan.c},
                   {"q_max", scan.q_max},
                   {"rows", scan.rows.size()},
                   {"composite_passing", scan.composite_passing}};
            j["passing"] = json::array();
            for (const auto& [q, p] : scan.passing)
                j["passing"].push_back({{"q", q}, {"p", p.get_str()}});
            emit(j.dump(2), out_path);
        } else {
            emit(frob::except_one_csv(scan), out_path);
        }
        return scan.composite_passing == 0 ? 0 : 1;
    }

    if (cmd_props->parsed()) {
        props_config.threads = threads;
        props_config.long_run = long_run;
        if ((props_config.scan_hi > k_wide_range || props_config.multiple_p_max > 10'000'000 ||
             props_config.except_one_q_max > 10000) &&
            !long_run) {
            std::cerr << "error: these bounds are an hour-scale job; pass --long-run\n";
            return 2;
        }
        frob::PropositionReport report = frob::run_proposition_suite(props_config);
        emit(output == "json" ? to_json(report).dump(2) : to_text(report), out_path);
        return report.all_pass() ? 0 : 1;
    }

    if (cmd_count->parsed()) {
        if (count_hi > k_wide_range && !long_run) {
            std::cerr << "error: bound above 10^9 is an hour-scale job; pass --long-run\n";
            return 2;
        }
        uint64_t count = frob::count_fermat_pseudoprimes(count_hi, count_bases, threads, long_run);
        if (output == "json") {
            json j{{"version", frob::k_version},
                   {"hi", count_hi},
                   {"bases", count_bases},
                   {"count", count}};
            emit(j.dump(2), out_path);
        } else {
            emit(std::to_string(count), out_path);
        }
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
