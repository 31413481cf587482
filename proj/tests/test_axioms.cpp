#include <doctest.h>

#include <cmath>

#include "levelset/axioms.hpp"
#include "levelset/factory.hpp"
#include "levelset/transforms.hpp"

using namespace levelset;

namespace {

Market market_of(const std::string& text) {
    return make_market(market_spec_from_string(text)).market;
}

MarketSpec mock_spec(int n, Bundle q0, double gamma = 1.0) {
    MarketSpec spec;
    spec.n = n;
    spec.family = "mock";
    spec.initial_reserves = std::move(q0);
    spec.fee_gamma = gamma;
    return spec;
}

Market flat_market() {
    PotentialFunction phi;
    phi.n = 2;
    phi.domain = Domain::PositiveOrthant;
    phi.family = "mock-flat";
    phi.value = [](const Bundle& q) {
        if (!is_strictly_positive(q)) throw DomainError("mock-flat: domain");
        return 1.0;
    };
    phi.gradient = [](const Bundle&) { return Bundle{0.0, 0.0}; };
    return Market(mock_spec(2, {1.0, 1.0}), std::move(phi));
}

Market convex_control_market() {
    PotentialFunction phi;
    phi.n = 2;
    phi.domain = Domain::PositiveOrthant;
    phi.family = "mock-convex";
    phi.value = [](const Bundle& q) {
        if (!is_strictly_positive(q)) throw DomainError("mock-convex: domain");
        return q[0] * q[0] + q[1] * q[1];
    };
    phi.gradient = [](const Bundle& q) { return Bundle{2.0 * q[0], 2.0 * q[1]}; };
    return Market(mock_spec(2, {1.0, 1.0}), std::move(phi));
}

}  // namespace

TEST_SUITE("axioms") {

TEST_CASE("conforming families pass the full suite at a thousand trials") {
    for (const char* text :
         {R"({"n":2,"representation":"potential","family":"uniswap","params":{},
              "initial_reserves":[4,9],"fee_gamma":1.0})",
          R"({"n":2,"representation":"potential","family":"curve","params":{},
              "initial_reserves":[1,1],"fee_gamma":1.0})"}) {
        AxiomSuite suite = run_axiom_suite(market_of(text), 1000, 7);
        CHECK(suite.all_passed);
        for (const AxiomReport& rep : suite.reports) {
            CHECK(rep.verdict == "pass (sampled)");
            CHECK(rep.performed > 0);
        }
    }
}

TEST_CASE("a flat potential accepts dominated trades") {
    AxiomReport rep = check_no_dominated(flat_market(), 200, 11);
    CHECK(rep.verdict == "fail");
    CHECK_FALSE(rep.counterexample.is_null());
    CHECK(rep.violation > 1e-8);  // far beyond ten times the tolerance
}

TEST_CASE("a convex potential worsens no repeat trade and fails responsiveness") {
    Market control = convex_control_market();
    AxiomReport rep = check_demand_responsiveness(control, 400, 12);
    CHECK(rep.verdict == "fail");
    CHECK_FALSE(rep.counterexample.is_null());
    CHECK(rep.violation > 1e-6);

    // its superlevel sets are not convex either
    AxiomReport mix = check_upper_set_convexity(control, 400, 13);
    CHECK(mix.verdict == "fail");
}

TEST_CASE("a drifting level breaks path independence") {
    Market drifting = market_of(
        R"({"n":2,"representation":"potential","family":"uniswap","params":{},
            "initial_reserves":[4,9],"fee_gamma":0.9})");
    AxiomReport rep = check_path_independence(drifting, 300, 14);
    CHECK(rep.verdict == "fail");
    CHECK_FALSE(rep.counterexample.is_null());
    AxiomReport strong = check_strong_path_independence(drifting, 300, 15);
    CHECK(strong.verdict == "fail");
}

TEST_CASE("shift-invariant markets with small reserves lose the reserve guarantee") {
    Market m = market_of(
        R"({"n":2,"representation":"potential","family":"from-cost:lmsr","params":{"b":1.0},
            "initial_reserves":[0.1,0.1],"fee_gamma":1.0})");
    AxiomReport rep = check_bounded_reserves(m, 500, 16);
    CHECK(rep.verdict == "fail");
    CHECK_FALSE(rep.counterexample.is_null());
}

TEST_CASE("reports are byte-identical for a fixed seed") {
    Market m = market_of(
        R"({"n":2,"representation":"potential","family":"uniswap","params":{},
            "initial_reserves":[4,9],"fee_gamma":1.0})");
    std::string a = to_json(run_axiom_suite(m, 250, 99)).dump();
    std::string b = to_json(run_axiom_suite(m, 250, 99)).dump();
    CHECK(a == b);
}

TEST_CASE("characterization conditions split exactly across families") {
    CHECK_FALSE(check_reserve_characterization(uniswap(), 300, 21).failed());
    CHECK_FALSE(check_reserve_characterization(balancer({0.75, 0.25}), 300, 22).failed());
    CHECK_FALSE(
        check_reserve_characterization(perspective_potential(lmsr(2, 1.0)), 300, 23).failed());
    CHECK_FALSE(check_reserve_characterization(curve(), 300, 24).failed());

    AxiomReport sum = check_reserve_characterization(constant_sum(), 300, 25);
    CHECK(sum.failed());
    CHECK(sum.counterexample["domain_positive"] == false);
    CHECK(sum.counterexample["boundary_condition"] == false);
    CHECK(sum.counterexample["increasing"] == true);
    CHECK(sum.counterexample["quasiconcave"] == true);
}

TEST_CASE("liquidation check treats domain-edge caps by their boundary value") {
    // perspective(lmsr): crossings past the representable range must not be
    // declared failures (the boundary value extrapolates below the level)
    Market m = market_of(
        R"({"n":2,"representation":"potential","family":"perspective-of:lmsr",
            "params":{"b":1.0},"initial_reserves":[1,1],"fee_gamma":1.0})");
    AxiomReport rep = check_liquidation(m, 600, 26);
    CHECK(rep.verdict == "pass (sampled)");
}

}  // TEST_SUITE
