#pragma once

#include <optional>

#include "levelset/bundle.hpp"

namespace levelset {

// Result of an accepted trade. post_reserves = pre_reserves + accepted_trade + fee;
// with fee_gamma = 1 the fee is zero and the level is unchanged.
struct Quote {
    Bundle requested;
    Bundle accepted_trade;
    Bundle fee;
    std::optional<double> cash_leg;  // cost-representation markets only
    Bundle pre_reserves;
    Bundle post_reserves;
    double pre_level = 0.0;
    double post_level = 0.0;
};

}  // namespace levelset
