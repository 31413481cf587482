#pragma once

#include <functional>
#include <map>
#include <string>

#include "levelset/bundle.hpp"
#include "levelset/gradients.hpp"
#include "levelset/simplex.hpp"

namespace levelset {

/// A prediction-market cost function: convex, increasing, and invariant under
/// shifts along the all-ones direction (the grand bundle prices at face
/// value). Families that break one of these properties (the two-asset Brier
/// closed form is not increasing everywhere) carry conforming = false and are
/// excluded from the conformance suites while remaining usable as inputs to
/// the perspective construction.
struct CostFunction {
    int n = 0;
    bool conforming = true;
    std::string family;
    std::map<std::string, double> params;
    std::function<double(const Bundle&)> value;
    std::function<Bundle(const Bundle&)> gradient;  // empty: finite differences

    double operator()(const Bundle& q) const { return value(q); }

    Bundle grad(const Bundle& q) const {
        if (gradient) return gradient(q);
        return grad_fd(value, q);
    }
};

/// Log market scoring rule, C(q) = b log sum_i exp(q_i / b).
CostFunction lmsr(int n, double b);

/// Two-asset cost equivalent of the constant-product market at level k:
/// C(q) = (q1 + q2 + sqrt(4k^2 + (q1-q2)^2)) / 2.
CostFunction uniswap_cost(double k);

/// Two-asset quadratic-score cost, piecewise closed form. Not increasing on
/// the outer branches, so conforming = false.
CostFunction brier_cost_n2();

/// Cost defined by the numeric conjugate of a generating function on the
/// simplex.
CostFunction cost_from_generating(std::function<double(const SimplexPoint&)> G, int n,
                                  std::string family, int grid_resolution = 512);

/// Generating function of the quadratic score in cost-normalized form,
/// G(p) = |p|^2 - 1. The constant places the induced cost's zero level set in
/// the negative orthant (cost positive at the origin), which the perspective
/// construction requires; scores from affinely shifted generators coincide up
/// to a constant.
double brier_cost_generating(const SimplexPoint& p);

/// Generating function of the constant-product market: G_k(p) = -2k sqrt(p1 p2).
std::function<double(const SimplexPoint&)> uniswap_generating(double k);

/// Cash leg for selling bundle r to the trader against history h:
/// alpha = C(-q_h - r) - C(-q_h). Prediction-market states are negated
/// reserves; the sign flip is applied here and nowhere else.
double trade_cost(const CostFunction& C, const History& h, const Bundle& r_securities);

/// Cash-free equivalent trade r + alpha * ones; leaves C(-q_h - .) at its
/// pre-trade value.
Bundle cashless_trade(const CostFunction& C, const History& h, const Bundle& r_securities);

}  // namespace levelset
