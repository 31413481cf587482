#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "levelset/bundle.hpp"
#include "levelset/gradients.hpp"

namespace levelset {

/// A constant-function market potential: increasing and quasiconcave on its
/// domain. `homogeneous` records the 1-homogeneity claim phi(a q) = a phi(q).
struct PotentialFunction {
    int n = 0;
    Domain domain = Domain::All;
    bool homogeneous = false;
    std::string family;
    std::map<std::string, double> params;
    std::function<double(const Bundle&)> value;
    std::function<Bundle(const Bundle&)> gradient;  // empty: finite differences

    double operator()(const Bundle& q) const { return value(q); }

    bool in_domain(const Bundle& q) const { return levelset::in_domain(domain, q); }

    Bundle grad(const Bundle& q) const {
        if (gradient) return gradient(q);
        return grad_fd(value, q);
    }
};

/// Constant geometric mean of n assets (the constant-product market for n=2).
PotentialFunction uniswap(int n = 2);

/// Weighted geometric mean with weights pi on the simplex.
PotentialFunction balancer(const std::vector<double>& pi);

/// phi(q) = sum_i q_i on all of R^n.
PotentialFunction constant_sum(int n = 2);

/// Stable-pair potential phi(q) = sum_i q_i - sum_i 1/q_i on the strictly
/// positive orthant. The reciprocal term carries a minus sign so the family is
/// increasing and concave with phi -> -inf toward the boundary.
PotentialFunction curve(int n = 2);

/// Estimate of the boundary value lim_{a->0+} phi(q + a*ones) for q on the
/// boundary of the nonnegative orthant (q >= 0 with some zero coordinate, or
/// q = 0). Evaluates a decreasing ladder a in {1e-2,...,1e-8} and extrapolates;
/// besides the direct stabilization check, a power-law and a reciprocal-log
/// tail model are fitted and validated on a held-out rung, which handles
/// families whose boundary approach is as slow as 1/log(1/a). Divergence is
/// reported as +/-infinity. Throws ToleranceError when no model stabilizes.
double boundary_limit(const PotentialFunction& phi, const Bundle& q);

}  // namespace levelset
