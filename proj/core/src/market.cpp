#include "levelset/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace levelset {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Bundle adjusted_reserves(const Bundle& q, const Bundle& s, double gamma) {
    Bundle adj(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        double plus = std::max(s[i], 0.0);
        double minus = std::max(-s[i], 0.0);
        adj[i] = q[i] + gamma * plus - minus;
    }
    return adj;
}

}  // namespace

Market::Market(MarketSpec spec, PotentialFunction potential, std::optional<CostFunction> cost_view,
               std::optional<CostFunction> perspective_base)
    : spec_(std::move(spec)),
      potential_(std::move(potential)),
      cost_view_(std::move(cost_view)),
      perspective_base_(std::move(perspective_base)) {
    if (spec_.n != potential_.n) throw SpecError("market: spec and potential disagree on n");
    if (!potential_.in_domain(spec_.initial_reserves))
        throw DomainError("market: initial reserves outside the family domain");
    history_.initial_reserves = spec_.initial_reserves;
    reserves_ = spec_.initial_reserves;
    target_level_ = potential_(reserves_);
    fee_beta_ = (1.0 - spec_.fee_gamma) / spec_.fee_gamma;
}

double Market::membership_tolerance(const Bundle& s) const {
    double base = validation_tolerance();
    if (static_cast<int>(s.size()) != spec_.n || !all_finite(s)) return base;
    Bundle adj = adjusted_reserves(reserves_, s, spec_.fee_gamma);
    if (!potential_.in_domain(adj)) return base;
    try {
        Bundle g = potential_.grad(adj);
        double norm = 0.0;
        for (double gi : g) norm += std::abs(gi);
        double scale = 1.0 + std::abs(max_element(reserves_));
        return base + 1e-12 * norm * scale;
    } catch (const DomainError&) {
        return base;
    } catch (const BracketError&) {
        return base;
    } catch (const ToleranceError&) {
        return base;
    }
}

double Market::level_residual(const Bundle& s) const {
    if (static_cast<int>(s.size()) != spec_.n || !all_finite(s))
        return std::numeric_limits<double>::quiet_NaN();
    Bundle adj = adjusted_reserves(reserves_, s, spec_.fee_gamma);
    if (!potential_.in_domain(adj)) return std::numeric_limits<double>::quiet_NaN();
    try {
        return potential_(adj) - target_level_;
    } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

bool Market::is_valid(const Bundle& s) const {
    double residual = level_residual(s);
    return std::isfinite(residual) && std::abs(residual) <= membership_tolerance(s);
}

Bundle Market::fee(const Bundle& pre_fee_trade) const {
    Bundle f(pre_fee_trade.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = fee_beta_ * std::max(pre_fee_trade[i], 0.0);
    return f;
}

Bundle Market::snap_to_level(const Bundle& pre_fee_trade) const {
    Bundle post = add(reserves_, pre_fee_trade);
    double residual = potential_(post) - target_level_;
    double scale = std::max(1.0, std::abs(target_level_));
    if (std::abs(residual) <= 1e-15 * scale) return pre_fee_trade;

    // Correct along the ones direction on full domains; positivity-domain
    // markets correct along the most-demanded asset so the adjustment cannot
    // leave the orthant.
    std::size_t axis = 0;
    bool along_ones = potential_.domain == Domain::All;
    if (!along_ones) {
        for (std::size_t i = 1; i < pre_fee_trade.size(); ++i)
            if (pre_fee_trade[i] < pre_fee_trade[axis]) axis = i;
    }
    auto shifted = [&](double delta) {
        Bundle probe = post;
        if (along_ones)
            for (double& x : probe) x += delta;
        else
            probe[axis] += delta;
        try {
            return potential_(probe);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    double h = 1e-7 * scale;
    try {
        double delta = solve_monotone(shifted, target_level_, -h, h, Direction::Increasing);
        Bundle snapped = pre_fee_trade;
        if (along_ones)
            for (double& x : snapped) x += delta;
        else
            snapped[axis] += delta;
        return snapped;
    } catch (const BracketError&) {
        return pre_fee_trade;  // keep the submitted bundle; it is within tolerance
    } catch (const ToleranceError&) {
        // Implicit potentials bottom out at their own solve noise; the
        // submitted bundle already sits within the validation band.
        return pre_fee_trade;
    }
}

std::pair<Market, Quote> Market::apply_impl(const Bundle& pre_fee_trade, bool snap) const {
    if (static_cast<int>(pre_fee_trade.size()) != spec_.n || !all_finite(pre_fee_trade))
        throw SpecError("apply: malformed trade bundle");
    Bundle post = add(reserves_, pre_fee_trade);
    if (!potential_.in_domain(post)) throw SpecError("apply: trade leaves the family domain");
    double residual = potential_(post) - target_level_;
    double tolerance = validation_tolerance();
    try {
        Bundle g = potential_.grad(post);
        double norm = 0.0;
        for (double gi : g) norm += std::abs(gi);
        tolerance += 1e-12 * norm * (1.0 + std::abs(max_element(reserves_)));
    } catch (const DomainError&) {
    } catch (const BracketError&) {
    } catch (const ToleranceError&) {
    }
    if (!(std::abs(residual) <= tolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "apply: bundle misses the level set by " << residual;
        throw SpecError(os.str());
    }

    Bundle accepted = snap ? snap_to_level(pre_fee_trade) : pre_fee_trade;
    Bundle paid_fee = fee(accepted);
    Bundle executed = add(accepted, paid_fee);

    Market next = *this;
    next.history_.append(executed);
    next.reserves_ = add(reserves_, executed);
    next.target_level_ =
        spec_.fee_gamma == 1.0 ? target_level_ : next.potential_(next.reserves_);

    Quote quote;
    quote.requested = pre_fee_trade;
    quote.accepted_trade = accepted;
    quote.fee = paid_fee;
    quote.pre_reserves = reserves_;
    quote.post_reserves = next.reserves_;
    quote.pre_level = target_level_;
    quote.post_level = next.target_level_;
    return {std::move(next), std::move(quote)};
}

std::pair<Market, Quote> Market::apply(const Bundle& pre_fee_trade) const {
    return apply_impl(pre_fee_trade, true);
}

std::pair<Market, Quote> Market::apply_exact(const Bundle& pre_fee_trade) const {
    return apply_impl(pre_fee_trade, false);
}

std::pair<Market, Quote> Market::apply_combined(const Bundle& bundle) const {
    if (static_cast<int>(bundle.size()) != spec_.n || !all_finite(bundle))
        throw SpecError("apply_combined: malformed trade bundle");
    Bundle pre_fee(bundle.size());
    for (std::size_t i = 0; i < bundle.size(); ++i) {
        double plus = std::max(bundle[i], 0.0);
        double minus = std::max(-bundle[i], 0.0);
        pre_fee[i] = spec_.fee_gamma * plus - minus;
    }
    auto [next, quote] = apply(pre_fee);
    quote.requested = bundle;
    return {std::move(next), std::move(quote)};
}

LiquidationResult Market::liquidate(const Bundle& give, const Bundle& want) const {
    if (static_cast<int>(give.size()) != spec_.n || static_cast<int>(want.size()) != spec_.n)
        throw SpecError("liquidate: wrong bundle length");
    if (!is_semipositive(give) || !is_semipositive(want))
        throw SpecError("liquidate: give and want must be nonnegative and nonzero");

    const double gamma = spec_.fee_gamma;
    auto traded = [&](double beta) {
        Bundle s(give.size());
        for (std::size_t i = 0; i < give.size(); ++i) s[i] = give[i] - beta * want[i];
        return s;
    };
    auto level_at = [&](double beta) -> double {
        Bundle adj = adjusted_reserves(reserves_, traded(beta), gamma);
        if (!potential_.in_domain(adj)) return kNegInf;
        try {
            return potential_(adj);
        } catch (const DomainError&) {
            return kNegInf;
        }
    };

    std::optional<double> cap = domain_exit_beta(give, want);
    if (cap) *cap *= 1.0 - 8.0 * std::numeric_limits<double>::epsilon();

    double hi_seed = cap ? std::min(*cap * 0.5, 1.0) : 1.0;
    // Solve in level units one order below the validation band: nested
    // (perspective-style) potentials cannot be resolved past their own inner
    // solve noise, so demanding 1e-12 here would be vacuous precision.
    RootFindConfig cfg;
    cfg.abs_tol = 1e-10 * std::max(1.0, std::abs(target_level_));
    double beta;
    try {
        beta = solve_monotone(level_at, target_level_, 0.0, hi_seed, Direction::Decreasing, cfg,
                              {0.0, cap});
    } catch (const BracketError& e) {
        throw BracketError(std::string("liquidate: ") + e.what(), e.max_feasible());
    }
    return {beta, traded(beta)};
}

std::optional<double> Market::domain_exit_beta(const Bundle& give, const Bundle& want) const {
    // The adjusted holding of a demanded asset i is piecewise linear in beta
    // and still equals q_i at the sign kink beta = give_i/want_i, so its zero
    // always sits past the kink at (q_i + give_i) / want_i.
    if (potential_.domain != Domain::PositiveOrthant) return std::nullopt;
    double c = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (want[i] <= 0.0) continue;
        c = std::min(c, (reserves_[i] + give[i]) / want[i]);
    }
    return std::isfinite(c) ? std::optional<double>(c) : std::nullopt;
}

Quote Market::quote_securities(const Bundle& r_securities) const {
    if (!cost_view_) throw SpecError("quote_securities: market has no cost view");
    double alpha = trade_cost(*cost_view_, history_, r_securities);
    // The cash-free equivalent bundle is the pre-fee trade.
    Bundle combined = r_securities;
    for (double& x : combined) x += alpha;
    auto [next, quote] = apply(combined);
    (void)next;
    quote.requested = r_securities;
    quote.cash_leg = alpha;
    return quote;
}

bool verify_implicit_trade(const CostFunction& C, const Bundle& q_h, const Bundle& r, double alpha,
                           double alpha_prime, double gamma, double tol) {
    if (!(alpha > 0.0) || !(alpha_prime > 0.0))
        throw SpecError("verify_implicit_trade: announced levels must be positive");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw SpecError("verify_implicit_trade: gamma in (0,1]");
    Bundle post = add(q_h, r);
    if (!is_strictly_positive(post))
        throw DomainError("verify_implicit_trade: post reserves must be strictly positive");

    const double beta = (1.0 - gamma) / gamma;
    Bundle post_fee = post;
    for (std::size_t i = 0; i < r.size(); ++i) post_fee[i] += beta * std::max(r[i], 0.0);

    Bundle x1(post.size()), x2(post.size());
    for (std::size_t i = 0; i < post.size(); ++i) {
        x1[i] = -post[i] / alpha;
        x2[i] = -post_fee[i] / alpha_prime;
    }
    return std::abs(C(x1)) <= tol && std::abs(C(x2)) <= tol;
}

bool worst_case_loss_bound(const Market& m, double b) {
    if (!std::isfinite(b)) throw SpecError("worst_case_loss_bound: b must be finite");
    const History& h = m.history();
    Bundle q = h.initial_reserves;
    auto within = [&](const Bundle& cur) {
        for (std::size_t i = 0; i < cur.size(); ++i)
            if (cur[i] < h.initial_reserves[i] - b) return false;
        return true;
    };
    if (!within(q)) return false;
    for (const Bundle& trade : h.trades) {
        q = add(q, trade);
        if (!within(q)) return false;
    }
    return true;
}

nlohmann::ordered_json to_json(const TradeRecord& rec) {
    nlohmann::ordered_json j;
    j["seq"] = rec.seq;
    j["bundle"] = rec.bundle;
    j["fee"] = rec.fee;
    j["pre_level"] = rec.pre_level;
    j["post_level"] = rec.post_level;
    j["reserves"] = rec.reserves;
    return j;
}

TradeRecord trade_record_from_json(const nlohmann::json& j) {
    TradeRecord rec;
    try {
        rec.seq = j.at("seq").get<int>();
        rec.bundle = j.at("bundle").get<Bundle>();
        rec.fee = j.at("fee").get<Bundle>();
        rec.pre_level = j.at("pre_level").get<double>();
        rec.post_level = j.at("post_level").get<double>();
        rec.reserves = j.at("reserves").get<Bundle>();
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("malformed trade record: ") + e.what());
    }
    return rec;
}

std::string to_jsonl(const std::vector<TradeRecord>& records) {
    std::string out;
    for (const TradeRecord& rec : records) {
        out += to_json(rec).dump();
        out += '\n';
    }
    return out;
}

std::vector<TradeRecord> records_from_jsonl(const std::string& text) {
    std::vector<TradeRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(trade_record_from_json(nlohmann::json::parse(line)));
    }
    return out;
}

TradeRecord record_of(int seq, const Quote& quote) {
    TradeRecord rec;
    rec.seq = seq;
    rec.bundle = quote.accepted_trade;
    rec.fee = quote.fee;
    rec.pre_level = quote.pre_level;
    rec.post_level = quote.post_level;
    rec.reserves = quote.post_reserves;
    return rec;
}

std::pair<Market, std::vector<TradeRecord>> replay(Market fresh,
                                                   const std::vector<TradeRecord>& records) {
    std::vector<TradeRecord> replayed;
    replayed.reserve(records.size());
    Market m = std::move(fresh);
    for (const TradeRecord& rec : records) {
        auto [next, quote] = m.apply_exact(rec.bundle);
        replayed.push_back(record_of(rec.seq, quote));
        m = std::move(next);
    }
    return {std::move(m), std::move(replayed)};
}

}  // namespace levelset
