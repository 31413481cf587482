#pragma once

#include <functional>
#include <map>
#include <string>

#include "levelset/bundle.hpp"
#include "levelset/potential_function.hpp"
#include "levelset/simplex.hpp"

namespace levelset {

/// Payoff S(p, outcome) for a probabilistic report; may be -infinity (e.g.
/// the log score on an impossible-event report). Outcome indices are 0-based.
struct ScoringRule {
    int n = 0;
    std::string family;
    std::map<std::string, double> params;
    std::function<double(const SimplexPoint&, int)> score;

    double operator()(const SimplexPoint& p, int outcome) const { return score(p, outcome); }
};

/// Quadratic score S(p, i) = 2 p_i - |p|^2, generated by G(p) = |p|^2.
ScoringRule brier(int n = 2);

/// S(p, i) = log p_i.
ScoringRule log_score(int n = 2);

/// Two-outcome rule of the constant-product market at level k:
/// S(p, y_i) = -k sqrt(p_j / p_i), j the other outcome. This is the
/// orientation derived from its generating function -2k sqrt(p1 p2) (the
/// score rises in the reported probability of the realized outcome, which
/// properness needs); a scaled, negated boosting loss.
ScoringRule uniswap_score(double k);

/// Affine-approximation rule of a convex generating function:
/// S(p, i) = G(p) + <g_p, delta_i - p> with g_p a numeric supergradient taken
/// along simplex-tangent directions (one-sided near the boundary).
ScoringRule rule_from_generating(std::function<double(const SimplexPoint&)> G, int n,
                                 std::string family = "from-generating", double fd_step = 1e-6);

/// The proper scoring rule associated with a market potential and initial
/// reserves: cost view at the level of q0, numeric conjugate back to the
/// simplex, then the affine approximation above.
ScoringRule rule_from_cfmm(const PotentialFunction& phi, const Bundle& q0);

struct PropernessReport {
    bool proper = true;
    // Largest distance (in grid cells) between a belief and the expected-score
    // argmax over the report grid.
    double max_cell_gap = 0.0;
    int beliefs = 0;
    int grid_points = 0;
};

/// Behavioral properness check for two-outcome rules: for random interior
/// beliefs, the expected score over a report grid must peak within one grid
/// cell of the belief.
PropernessReport check_properness(const ScoringRule& rule, int beliefs, int grid_points,
                                  std::uint64_t seed);

}  // namespace levelset
