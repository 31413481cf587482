#include <doctest.h>

#include <cmath>

#include "levelset/cost_function.hpp"
#include "levelset/rng.hpp"
#include "levelset/scoring.hpp"
#include "levelset/transforms.hpp"

using namespace levelset;

TEST_SUITE("scoring") {

TEST_CASE("quadratic score values") {
    ScoringRule S = brier();
    CHECK(S(SimplexPoint({1.0, 0.0}), 0) == doctest::Approx(1.0));
    CHECK(S(SimplexPoint({0.5, 0.5}), 0) == doctest::Approx(0.5));
    CHECK(S(SimplexPoint({1.0, 0.0}), 1) == doctest::Approx(-1.0));
}

TEST_CASE("log score values") {
    ScoringRule S = log_score();
    CHECK(S(SimplexPoint({1.0, 0.0}), 0) == doctest::Approx(0.0));
    CHECK(S(SimplexPoint({0.5, 0.5}), 0) == doctest::Approx(-std::log(2.0)));
    CHECK(S(SimplexPoint({0.0, 1.0}), 0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("constant-product rule values") {
    ScoringRule S1 = uniswap_score(1.0);
    CHECK(S1(SimplexPoint({0.5, 0.5}), 0) == doctest::Approx(-1.0));
    CHECK(S1(SimplexPoint({0.5, 0.5}), 1) == doctest::Approx(-1.0));
    CHECK(S1(SimplexPoint({0.8, 0.2}), 0) == doctest::Approx(-0.5));
    ScoringRule S2 = uniswap_score(2.0);
    CHECK(S2(SimplexPoint({0.5, 0.5}), 0) == doctest::Approx(-2.0));
}

TEST_CASE("affine approximation recovers the closed-form rules") {
    Rng rng(501);

    auto norm2 = [](const SimplexPoint& p) {
        double s = 0.0;
        for (double x : p.p) s += x * x;
        return s;
    };
    ScoringRule from_norm = rule_from_generating(norm2, 2);
    ScoringRule exact_brier = brier();
    for (int t = 0; t < 50; ++t) {
        double p1 = rng.uniform(0.02, 0.98);
        SimplexPoint p({p1, 1.0 - p1});
        int outcome = rng.coin() ? 1 : 0;
        CHECK(std::abs(from_norm(p, outcome) - exact_brier(p, outcome)) <= 1e-6);
    }

    auto entropy = [](const SimplexPoint& p) {
        double s = 0.0;
        for (double x : p.p)
            if (x > 0.0) s += x * std::log(x);
        return s;
    };
    ScoringRule from_entropy = rule_from_generating(entropy, 2);
    ScoringRule exact_log = log_score();
    for (int t = 0; t < 50; ++t) {
        double p1 = rng.uniform(0.05, 0.95);
        SimplexPoint p({p1, 1.0 - p1});
        int outcome = rng.coin() ? 1 : 0;
        CHECK(std::abs(from_entropy(p, outcome) - exact_log(p, outcome)) <= 1e-5);
    }

    for (double k : {1.0, 2.0}) {
        ScoringRule from_gen = rule_from_generating(uniswap_generating(k), 2);
        ScoringRule exact = uniswap_score(k);
        for (int t = 0; t < 50; ++t) {
            double p1 = rng.uniform(0.05, 0.95);
            SimplexPoint p({p1, 1.0 - p1});
            int outcome = rng.coin() ? 1 : 0;
            CHECK(std::abs(from_gen(p, outcome) - exact(p, outcome)) <= 1e-6);
        }
    }
}

TEST_CASE("affine shifts of the generator shift scores by exactly the shift") {
    Rng rng(502);
    auto norm2 = [](const SimplexPoint& p) {
        double s = 0.0;
        for (double x : p.p) s += x * x;
        return s;
    };
    Bundle a{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    double b = rng.uniform(-1.0, 1.0);
    auto shifted = [norm2, a, b](const SimplexPoint& p) {
        return norm2(p) + a[0] * p[0] + a[1] * p[1] + b;
    };
    ScoringRule base = rule_from_generating(norm2, 2);
    ScoringRule moved = rule_from_generating(shifted, 2);
    for (int t = 0; t < 30; ++t) {
        double p1 = rng.uniform(0.05, 0.95);
        SimplexPoint p({p1, 1.0 - p1});
        for (int outcome = 0; outcome < 2; ++outcome)
            CHECK(moved(p, outcome) - base(p, outcome) ==
                  doctest::Approx(a[outcome] + b).epsilon(1e-9));
    }
}

TEST_CASE("market-derived rules match their closed forms") {
    // constant-product market at level 1 and level 2
    ScoringRule r1 = rule_from_cfmm(uniswap(), {1.0, 1.0});
    ScoringRule exact1 = uniswap_score(1.0);
    ScoringRule r2 = rule_from_cfmm(uniswap(), {2.0, 2.0});
    ScoringRule exact2 = uniswap_score(2.0);
    Rng rng(503);
    for (int t = 0; t < 25; ++t) {
        double p1 = rng.uniform(0.05, 0.95);
        SimplexPoint p({p1, 1.0 - p1});
        for (int outcome = 0; outcome < 2; ++outcome) {
            CHECK(std::abs(r1(p, outcome) - exact1(p, outcome)) <= 1e-5);
            CHECK(std::abs(r2(p, outcome) - exact2(p, outcome)) <= 1e-5);
            // scale equivariance of the one-homogeneous family
            CHECK(std::abs(r2(p, outcome) - 2.0 * r1(p, outcome)) <= 1e-5);
        }
    }
}

TEST_CASE("the softmax-cost market scores like the log rule up to affine terms") {
    PotentialFunction phi = potential_from_cost(lmsr(2, 1.0));
    ScoringRule derived = rule_from_cfmm(phi, {0.4, -0.3});
    Rng rng(504);
    for (int t = 0; t < 20; ++t) {
        double p1 = rng.uniform(0.1, 0.9);
        double q1 = rng.uniform(0.1, 0.9);
        SimplexPoint p({p1, 1.0 - p1});
        SimplexPoint q({q1, 1.0 - q1});
        for (int outcome = 0; outcome < 2; ++outcome) {
            double diff = derived(p, outcome) - derived(q, outcome);
            double expected = std::log(p[outcome]) - std::log(q[outcome]);
            CHECK(std::abs(diff - expected) <= 1e-4);
        }
    }
}

TEST_CASE("properness grid holds for every rule family") {
    CHECK(check_properness(brier(), 20, 201, 61).proper);
    CHECK(check_properness(log_score(), 20, 201, 62).proper);
    CHECK(check_properness(uniswap_score(1.0), 20, 201, 63).proper);
    CHECK(check_properness(uniswap_score(2.0), 20, 201, 64).proper);
    CHECK(check_properness(rule_from_cfmm(uniswap(), {1.0, 1.0}), 20, 201, 65).proper);

    // an improper rule must be caught: score the *other* outcome's closed form
    ScoringRule wrong;
    wrong.n = 2;
    wrong.family = "anti";
    wrong.score = [](const SimplexPoint& p, int outcome) { return -p[outcome]; };
    CHECK_FALSE(check_properness(wrong, 20, 201, 66).proper);
}

}  // TEST_SUITE
