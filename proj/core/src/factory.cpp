#include "levelset/factory.hpp"

#include <cmath>

#include "levelset/conjugate.hpp"

namespace levelset {

namespace {

MarketSpec base_spec(const MarketSpec& spec, const std::string& base_family,
                     Representation representation) {
    MarketSpec inner = spec;
    inner.family = base_family;
    inner.representation = representation;
    return inner;
}

std::vector<double> weights_of(const MarketSpec& spec) {
    std::vector<double> pi(spec.n);
    for (int i = 0; i < spec.n; ++i) pi[i] = spec.param("pi" + std::to_string(i + 1));
    return pi;
}

}  // namespace

CostFunction make_cost(const MarketSpec& spec) {
    auto [head, arg] = split_family(spec.family);
    if (head == "lmsr") return lmsr(spec.n, spec.param("b"));
    if (head == "uniswap-cost") return uniswap_cost(spec.param("k"));
    if (head == "brier") return brier_cost_n2();
    if (head == "from-conjugate") {
        int grid = static_cast<int>(spec.param_or("grid_resolution", 512));
        if (arg == "brier") return cost_from_generating(brier_cost_generating, spec.n,
                                                        "from-conjugate:brier", grid);
        if (arg == "uniswap") {
            if (spec.n != 2) throw SpecError("from-conjugate:uniswap is a two-asset family");
            return cost_from_generating(uniswap_generating(spec.param_or("k", 1.0)), 2,
                                        "from-conjugate:uniswap", grid);
        }
        throw SpecError("unknown generating function '" + arg + "'");
    }
    if (head == "from-potential") {
        PotentialFunction phi = make_potential(base_spec(spec, arg, Representation::Potential));
        if (spec.has_param("level")) return cost_from_potential_level(phi, spec.param("level"));
        return cost_from_potential(phi, spec.initial_reserves);
    }
    throw SpecError("family '" + spec.family + "' is not a cost family");
}

PotentialFunction make_potential(const MarketSpec& spec) {
    auto [head, arg] = split_family(spec.family);
    if (head == "uniswap") return uniswap(spec.n);
    if (head == "balancer") return balancer(weights_of(spec));
    if (head == "curve") return curve(spec.n);
    if (head == "constant-sum") return constant_sum(spec.n);
    if (head == "from-cost") {
        CostFunction C = make_cost(base_spec(spec, arg, Representation::Cost));
        return potential_from_cost(C);
    }
    if (head == "perspective-of") {
        CostFunction C = make_cost(base_spec(spec, arg, Representation::Cost));
        return perspective_potential(C, spec.param_or("shift", 0.0));
    }
    throw SpecError("family '" + spec.family + "' is not a potential family");
}

MarketBuild make_market(const MarketSpec& spec) {
    validate(spec);
    std::vector<std::string> warnings;

    PotentialFunction phi;
    std::optional<CostFunction> cost_view;
    std::optional<CostFunction> perspective_base;

    if (spec.representation == Representation::Cost) {
        CostFunction C = make_cost(spec);
        phi = potential_from_cost(C);
        cost_view = std::move(C);
    } else {
        auto [head, arg] = split_family(spec.family);
        phi = make_potential(spec);
        if (head == "perspective-of")
            perspective_base = make_cost(base_spec(spec, arg, Representation::Cost));
        if (!phi.in_domain(spec.initial_reserves))
            throw DomainError("initial reserves outside the family domain");
        cost_view = cost_from_potential(phi, spec.initial_reserves);
    }

    if (phi.domain == Domain::All)
        warnings.push_back(
            "family '" + spec.family +
            "' keeps its level sets parallel on all of R^n; reserves can be driven negative "
            "(bounded reserves is unattainable for shift-invariant markets)");

    Market market(spec, std::move(phi), std::move(cost_view), std::move(perspective_base));
    return {std::move(market), std::move(warnings)};
}

ScoringRule make_rule(const MarketSpec& spec) {
    if (spec.representation == Representation::Potential) {
        PotentialFunction phi = make_potential(spec);
        return rule_from_cfmm(phi, spec.initial_reserves);
    }
    CostFunction C = make_cost(spec);
    auto G = generating_from_cost(C.value, C.n);
    return rule_from_generating(std::move(G), C.n, "from-cost:" + C.family);
}

}  // namespace levelset
