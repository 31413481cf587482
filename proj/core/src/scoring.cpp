#include "levelset/scoring.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "levelset/conjugate.hpp"
#include "levelset/rng.hpp"
#include "levelset/transforms.hpp"

namespace levelset {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_outcome(const SimplexPoint& p, int outcome, int n) {
    if (p.n() != n) throw DomainError("scoring: report has wrong outcome count");
    if (outcome < 0 || outcome >= n) throw DomainError("scoring: outcome index out of range");
}

}  // namespace

ScoringRule brier(int n) {
    ScoringRule S;
    S.n = n;
    S.family = "brier";
    S.score = [n](const SimplexPoint& p, int outcome) {
        check_outcome(p, outcome, n);
        double norm2 = 0.0;
        for (double x : p.p) norm2 += x * x;
        return 2.0 * p[outcome] - norm2;
    };
    return S;
}

ScoringRule log_score(int n) {
    ScoringRule S;
    S.n = n;
    S.family = "log";
    S.score = [n](const SimplexPoint& p, int outcome) {
        check_outcome(p, outcome, n);
        return p[outcome] > 0.0 ? std::log(p[outcome]) : kNegInf;
    };
    return S;
}

ScoringRule uniswap_score(double k) {
    if (!(k > 0.0)) throw SpecError("uniswap score requires k > 0");
    ScoringRule S;
    S.n = 2;
    S.family = "uniswap";
    S.params = {{"k", k}};
    S.score = [k](const SimplexPoint& p, int outcome) {
        check_outcome(p, outcome, 2);
        double pi = p[outcome];
        double pj = p[1 - outcome];
        if (pi <= 0.0) return kNegInf;
        return -k * std::sqrt(pj / pi);
    };
    return S;
}

ScoringRule rule_from_generating(std::function<double(const SimplexPoint&)> G, int n,
                                 std::string family, double fd_step) {
    ScoringRule S;
    S.n = n;
    S.family = std::move(family);
    S.score = [G = std::move(G), n, fd_step](const SimplexPoint& p, int outcome) {
        check_outcome(p, outcome, n);

        // Supergradient along the tangent directions delta_j - delta_{n-1};
        // the representative with g_{n-1} = 0 is as good as any because
        // <ones, delta_i - p> = 0.
        auto eval_shift = [&](int j, double h, double& out) -> bool {
            std::vector<double> probe = p.p;
            probe[j] += h;
            probe[n - 1] -= h;
            if (probe[j] < 0.0 || probe[n - 1] < 0.0) return false;
            out = G(SimplexPoint(probe));
            return std::isfinite(out);
        };

        double g0 = G(p);
        Bundle g(n, 0.0);
        for (int j = 0; j + 1 < n; ++j) {
            double up = 0.0, dn = 0.0;
            bool ok_up = eval_shift(j, fd_step, up);
            bool ok_dn = eval_shift(j, -fd_step, dn);
            if (ok_up && ok_dn)
                g[j] = (up - dn) / (2.0 * fd_step);
            else if (ok_up)
                g[j] = (up - g0) / fd_step;
            else if (ok_dn)
                g[j] = (g0 - dn) / fd_step;
            else
                throw DomainError("rule_from_generating: cannot difference at the boundary");
        }

        double correction = g[outcome];
        for (int j = 0; j < n; ++j) correction -= g[j] * p[j];
        return g0 + correction;
    };
    return S;
}

ScoringRule rule_from_cfmm(const PotentialFunction& phi, const Bundle& q0) {
    CostFunction C = cost_from_potential(phi, q0);
    auto G = generating_from_cost(C.value, C.n);
    ScoringRule S = rule_from_generating(std::move(G), C.n, "from-cfmm:" + phi.family);
    S.params = phi.params;
    S.params["level"] = phi(q0);
    return S;
}

PropernessReport check_properness(const ScoringRule& rule, int beliefs, int grid_points,
                                  std::uint64_t seed) {
    if (rule.n != 2) throw SpecError("properness grid check covers two-outcome rules");
    if (grid_points < 2) throw SpecError("properness grid needs at least 2 points");

    PropernessReport rep;
    rep.beliefs = beliefs;
    rep.grid_points = grid_points;

    const double spacing = 1.0 / (grid_points - 1);
    std::vector<SimplexPoint> grid = simplex_grid_n2(grid_points);
    std::vector<std::array<double, 2>> scores(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        scores[i] = {rule(grid[i], 0), rule(grid[i], 1)};

    Rng rng(seed);
    for (int b = 0; b < beliefs; ++b) {
        double belief = rng.uniform(0.01, 0.99);
        double best = kNegInf;
        double best_p1 = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double expected = belief * scores[i][0] + (1.0 - belief) * scores[i][1];
            if (expected > best) {
                best = expected;
                best_p1 = grid[i][0];
            }
        }
        double gap = std::abs(best_p1 - belief) / spacing;
        rep.max_cell_gap = std::max(rep.max_cell_gap, gap);
        if (gap > 1.0 + 1e-9) rep.proper = false;
    }
    return rep;
}

}  // namespace levelset
