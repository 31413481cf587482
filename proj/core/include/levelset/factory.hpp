#pragma once

#include <string>
#include <vector>

#include "levelset/market.hpp"
#include "levelset/market_spec.hpp"
#include "levelset/scoring.hpp"
#include "levelset/transforms.hpp"

namespace levelset {

/// Builds the cost family named by a cost-representation spec.
CostFunction make_cost(const MarketSpec& spec);

/// Builds the potential family named by a potential-representation spec.
PotentialFunction make_potential(const MarketSpec& spec);

struct MarketBuild {
    Market market;
    std::vector<std::string> warnings;
};

/// Normalizes any spec to an executable market. Cost-specified markets get
/// the potential view phi(q) = -C(-q); potential markets gain a cost view at
/// the level of their initial reserves; perspective families also carry their
/// base cost for the announced-level protocol. Full-domain families that
/// cannot keep reserves nonnegative produce a warning rather than an error.
MarketBuild make_market(const MarketSpec& spec);

/// Scoring rule of the market described by the spec, derived through the
/// conjugacy pipeline (cost view, numeric generating function, affine rule).
ScoringRule make_rule(const MarketSpec& spec);

}  // namespace levelset
