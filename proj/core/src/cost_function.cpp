#include "levelset/cost_function.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "levelset/conjugate.hpp"

namespace levelset {

CostFunction lmsr(int n, double b) {
    if (!(b > 0.0)) throw SpecError("lmsr requires b > 0");
    if (n < 2) throw SpecError("lmsr requires n >= 2");
    CostFunction C;
    C.n = n;
    C.family = "lmsr";
    C.params = {{"b", b}};
    C.value = [b, n](const Bundle& q) {
        if (static_cast<int>(q.size()) != n) throw DomainError("lmsr: wrong bundle length");
        // log-sum-exp with the dominant term split out through log1p, so the
        // value stays exact when the remaining terms are far below epsilon
        // (deep perspective solves probe exactly that regime).
        double m = max_element(q) / b;
        double rest = 0.0;
        bool skipped_max = false;
        for (double qi : q) {
            double x = qi / b - m;
            if (!skipped_max && x == 0.0) {
                skipped_max = true;
                continue;
            }
            rest += std::exp(x);
        }
        return b * (m + std::log1p(rest));
    };
    C.gradient = [b, n](const Bundle& q) {
        double m = max_element(q) / b;
        double s = 0.0;
        Bundle g(n);
        for (int i = 0; i < n; ++i) {
            g[i] = std::exp(q[i] / b - m);
            s += g[i];
        }
        for (double& gi : g) gi /= s;
        return g;
    };
    return C;
}

CostFunction uniswap_cost(double k) {
    if (!(k > 0.0)) throw SpecError("uniswap-cost requires k > 0");
    CostFunction C;
    C.n = 2;
    C.family = "uniswap-cost";
    C.params = {{"k", k}};
    C.value = [k](const Bundle& q) {
        if (q.size() != 2) throw DomainError("uniswap-cost: two assets only");
        return 0.5 * (q[0] + q[1] + std::hypot(2.0 * k, q[0] - q[1]));
    };
    C.gradient = [k](const Bundle& q) {
        double u = q[0] - q[1];
        double s = std::hypot(2.0 * k, u);
        return Bundle{0.5 * (1.0 + u / s), 0.5 * (1.0 - u / s)};
    };
    return C;
}

CostFunction brier_cost_n2() {
    CostFunction C;
    C.n = 2;
    C.conforming = false;  // prices hit zero on the outer branches
    C.family = "brier";
    C.value = [](const Bundle& q) {
        if (q.size() != 2) throw DomainError("brier cost: two assets only");
        double u = q[0] - q[1];
        if (u >= 2.0) return q[0];
        if (u <= -2.0) return q[1];
        return 0.125 * (u * u + 4.0 * (1.0 + q[0] + q[1]));
    };
    C.gradient = [](const Bundle& q) {
        double u = q[0] - q[1];
        if (u >= 2.0) return Bundle{1.0, 0.0};
        if (u <= -2.0) return Bundle{0.0, 1.0};
        return Bundle{0.25 * (u + 2.0), 0.25 * (2.0 - u)};
    };
    return C;
}

CostFunction cost_from_generating(std::function<double(const SimplexPoint&)> G, int n,
                                  std::string family, int grid_resolution) {
    if (grid_resolution < 2) throw SpecError("conjugate grid resolution must be at least 2");
    CostFunction C;
    C.n = n;
    C.family = std::move(family);
    C.params = {{"grid_resolution", static_cast<double>(grid_resolution)}};
    C.value = [G = std::move(G), grid_resolution](const Bundle& q) {
        return conjugate_on_simplex(G, q, grid_resolution);
    };
    return C;
}

double brier_cost_generating(const SimplexPoint& p) {
    double s = 0.0;
    for (double x : p.p) s += x * x;
    return s - 1.0;
}

std::function<double(const SimplexPoint&)> uniswap_generating(double k) {
    if (!(k > 0.0)) throw SpecError("uniswap generating function requires k > 0");
    return [k](const SimplexPoint& p) {
        if (p.n() != 2) throw DomainError("uniswap generating function: two outcomes only");
        return -2.0 * k * std::sqrt(p[0] * p[1]);
    };
}

double trade_cost(const CostFunction& C, const History& h, const Bundle& r_securities) {
    if (!all_finite(r_securities)) throw DomainError("trade_cost: non-finite bundle");
    Bundle q = reserves(h);
    Bundle state = negate(q);
    return C(sub(state, r_securities)) - C(state);
}

Bundle cashless_trade(const CostFunction& C, const History& h, const Bundle& r_securities) {
    double alpha = trade_cost(C, h, r_securities);
    Bundle out = r_securities;
    for (double& x : out) x += alpha;
    return out;
}

}  // namespace levelset
