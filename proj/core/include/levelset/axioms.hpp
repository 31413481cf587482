#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "levelset/market.hpp"
#include "levelset/potential_function.hpp"

namespace levelset {

// Verdict of one randomized axiom check. Sampling cannot certify universal
// claims, so a clean run reports "pass (sampled)". A fail always carries a
// replayable counterexample whose violation exceeds ten times the working
// tolerance.
struct AxiomReport {
    std::string axiom;
    std::string verdict;  // "pass (sampled)" | "fail" | "inconclusive"
    int trials = 0;
    int performed = 0;    // trials whose setup succeeded
    double violation = 0.0;
    nlohmann::ordered_json counterexample;

    bool failed() const { return verdict == "fail"; }
};

nlohmann::ordered_json to_json(const AxiomReport& report);

// Trial magnitudes are log-uniform over [1e-3, 1e3] to hit both near-boundary
// and deep-interior behavior; strict inequalities use a 1e-7 slack band.

AxiomReport check_no_dominated(const Market& m, int trials, std::uint64_t seed);
AxiomReport check_path_independence(const Market& m, int trials, std::uint64_t seed);
// Builds pairs of histories with equal sums and compares sampled valid-trade
// membership between them.
AxiomReport check_strong_path_independence(const Market& m, int trials, std::uint64_t seed);
AxiomReport check_liquidation(const Market& m, int trials, std::uint64_t seed);
AxiomReport check_demand_responsiveness(const Market& m, int trials, std::uint64_t seed);
// Random liquidation walks monitoring reserve positivity.
AxiomReport check_bounded_reserves(const Market& m, int trials, std::uint64_t seed);
// Mixtures of on-level reserve points stay weakly above the level set
// (convexity of the upper reserve set).
AxiomReport check_upper_set_convexity(const Market& m, int trials, std::uint64_t seed);

// The three bounded-reserves characterization conditions for a potential:
// (a) domain is the strictly positive orthant, (b) increasing and
// quasiconcave on samples, (c) the boundary limit of phi equals its limit at
// the origin. Each condition is reported in the counterexample details even
// when another already failed.
AxiomReport check_reserve_characterization(const PotentialFunction& phi, int trials,
                                           std::uint64_t seed);

struct AxiomSuite {
    std::vector<AxiomReport> reports;
    bool all_passed = true;
};

/// Runs the five market axioms (and the upper-set convexity property) against
/// a market. Fixed seeds reproduce byte-identical reports.
AxiomSuite run_axiom_suite(const Market& m, int trials, std::uint64_t seed);

nlohmann::ordered_json to_json(const AxiomSuite& suite);

}  // namespace levelset
