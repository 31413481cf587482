#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "levelset/cost_function.hpp"
#include "levelset/market_spec.hpp"
#include "levelset/potential_function.hpp"
#include "levelset/quote.hpp"
#include "levelset/rootfind.hpp"

namespace levelset {

struct LiquidationResult {
    double beta = 0.0;
    Bundle trade;  // give - beta * want, fee-inclusive
};

/// The executable market. Every market is normalized to a potential view;
/// cost-specified markets keep their cost function for cash quoting, and
/// perspective-constructed markets additionally carry the base cost that
/// implicitly defines the potential (used by the announced-level protocol).
///
/// A Market is a value: apply() returns the successor market. Histories store
/// executed fee-inclusive bundles, so reserves are always the plain sum.
/// Writers sharing one market must serialize; snapshots are safe to read
/// anywhere.
class Market {
public:
    Market(MarketSpec spec, PotentialFunction potential,
           std::optional<CostFunction> cost_view = std::nullopt,
           std::optional<CostFunction> perspective_base = std::nullopt);

    const MarketSpec& spec() const { return spec_; }
    const PotentialFunction& potential() const { return potential_; }
    const std::optional<CostFunction>& cost_view() const { return cost_view_; }
    const std::optional<CostFunction>& perspective_base() const { return perspective_base_; }
    const History& history() const { return history_; }
    const Bundle& reserves() const { return reserves_; }
    double level() const { return target_level_; }
    double gamma() const { return spec_.fee_gamma; }
    double fee_beta() const { return fee_beta_; }
    int n() const { return spec_.n; }

    // Base relative tolerance for level-set membership.
    double validation_tolerance() const { return 1e-9 * std::max(1.0, std::abs(target_level_)); }

    /// Membership tolerance for a particular fee-inclusive bundle: the base
    /// relative band widened by the potential's local steepness, since an
    /// O(eps)-accurate bundle can only pin the level down to
    /// eps * |grad phi| near the domain boundary.
    double membership_tolerance(const Bundle& bundle) const;

    /// Membership of a fee-inclusive bundle s: the potential of
    /// reserves + gamma*s_plus - s_minus must match the current level and the
    /// adjusted reserves must stay in the family domain. Never throws; domain
    /// violations return false.
    bool is_valid(const Bundle& s) const;

    /// Signed level residual of a fee-inclusive bundle (NaN when out of
    /// domain).
    double level_residual(const Bundle& s) const;

    /// Fee owed on a pre-fee trade r: beta * max(r, 0), beta = (1-gamma)/gamma.
    Bundle fee(const Bundle& pre_fee_trade) const;

    /// Accepts a pre-fee trade r with potential(reserves + r) at the current
    /// level, snaps it exactly onto the level set, adds the fee, appends to the
    /// history, and recomputes the level when gamma < 1. SpecError if r is not
    /// level-preserving within tolerance.
    std::pair<Market, Quote> apply(const Bundle& pre_fee_trade) const;

    /// apply() without the level-set snap: the bundle is executed verbatim.
    /// Replay uses this so logged trades reproduce bit-identical state.
    std::pair<Market, Quote> apply_exact(const Bundle& pre_fee_trade) const;

    /// Accepts a fee-inclusive bundle (the on-chain form); splits it into its
    /// pre-fee trade gamma*s_plus - s_minus and the embedded fee, then follows
    /// apply().
    std::pair<Market, Quote> apply_combined(const Bundle& bundle) const;

    /// Exchanges the supplied bundle for a multiple of the demanded bundle:
    /// finds beta >= 0 with give - beta*want on the current level set (fee
    /// semantics included). BracketError when the demand cannot be filled
    /// before the domain edge; the error carries the largest feasible beta.
    LiquidationResult liquidate(const Bundle& give, const Bundle& want) const;

    /// The beta at which a liquidation give - beta*want would push some
    /// reserve to the domain edge; nullopt for full-domain families or when
    /// no demanded asset depletes.
    std::optional<double> domain_exit_beta(const Bundle& give, const Bundle& want) const;

    /// Cash quote for a securities request (net transfer to the market):
    /// the cash leg alpha and the equivalent cash-free bundle r + alpha*ones.
    /// Requires a cost view.
    Quote quote_securities(const Bundle& r_securities) const;

private:
    MarketSpec spec_;
    PotentialFunction potential_;
    std::optional<CostFunction> cost_view_;
    std::optional<CostFunction> perspective_base_;
    History history_;
    Bundle reserves_;
    double target_level_ = 0.0;
    double fee_beta_ = 0.0;

    Bundle snap_to_level(const Bundle& pre_fee_trade) const;
    std::pair<Market, Quote> apply_impl(const Bundle& pre_fee_trade, bool snap) const;
};

/// On-chain style verification of an announced trade under an implicitly
/// defined potential: accepts iff |C(-(q_h+r)/alpha)| <= tol and
/// |C(-(q_h+r+fee(r))/alpha_prime)| <= tol, fee(r) = (1-gamma)/gamma * r_plus.
bool verify_implicit_trade(const CostFunction& C, const Bundle& q_h, const Bundle& r, double alpha,
                           double alpha_prime, double gamma, double tol);

/// Every history prefix keeps reserves >= q0 - b*ones.
bool worst_case_loss_bound(const Market& m, double b);

// One JSON-lines record per accepted trade; `bundle` is the pre-fee trade.
struct TradeRecord {
    int seq = 0;
    Bundle bundle;
    Bundle fee;
    double pre_level = 0.0;
    double post_level = 0.0;
    Bundle reserves;
};

nlohmann::ordered_json to_json(const TradeRecord& rec);
TradeRecord trade_record_from_json(const nlohmann::json& j);
std::string to_jsonl(const std::vector<TradeRecord>& records);
std::vector<TradeRecord> records_from_jsonl(const std::string& text);

TradeRecord record_of(int seq, const Quote& quote);

/// Replays a persisted log against a freshly constructed market, re-deriving
/// reserves and levels. Same spec and same build give bit-identical records.
std::pair<Market, std::vector<TradeRecord>> replay(Market fresh,
                                                   const std::vector<TradeRecord>& records);

}  // namespace levelset
