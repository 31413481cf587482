#pragma once

#include "levelset/cost_function.hpp"
#include "levelset/potential_function.hpp"
#include "levelset/rootfind.hpp"

namespace levelset {

/// Potential view of a cost-function market: phi(q) = -C(-q) on all of R^n.
/// Valid trades of the resulting market coincide with the cash-free trades of
/// the cost market.
PotentialFunction potential_from_cost(const CostFunction& C);

/// Cost view of a potential market pinned to the level of q0:
/// C(q) = the unique c with phi(c*ones - q) = phi(q0), found by a bracketed
/// monotone solve in c. For positive-orthant potentials the bracket is seeded
/// just above max_i q_i and expanded upward; full-domain potentials seed at
/// min_i q_i - 1.
CostFunction cost_from_potential(const PotentialFunction& phi, const Bundle& q0,
                                 const RootFindConfig& cfg = {});

/// Same reduction with the target level given directly.
CostFunction cost_from_potential_level(const PotentialFunction& phi, double level,
                                       const RootFindConfig& cfg = {});

/// Reserves-aware potential of a cost function with C(0) > 0:
/// phi(q) = the alpha > 0 with C(-q/alpha) = 0, on the strictly positive
/// orthant. alpha -> C(-q/alpha) is strictly increasing and is bracketed by
/// [min_i q_i / t, max_i q_i / t] with t = C(0); when the bracket degenerates
/// (q proportional to ones) the value is min_i q_i / t exactly. The result is
/// 1-homogeneous, concave, and increasing. A constant `shift` may be supplied
/// to lift a cost with C(0) <= 0; otherwise SpecError.
PotentialFunction perspective_potential(const CostFunction& C, double shift = 0.0,
                                        const RootFindConfig& cfg = {});

}  // namespace levelset
