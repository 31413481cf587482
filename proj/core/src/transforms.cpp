#include "levelset/transforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace levelset {

PotentialFunction potential_from_cost(const CostFunction& C) {
    PotentialFunction phi;
    phi.n = C.n;
    phi.domain = Domain::All;
    phi.homogeneous = false;
    phi.family = "from-cost:" + C.family;
    phi.params = C.params;
    phi.value = [value = C.value](const Bundle& q) { return -value(negate(q)); };
    if (C.gradient)
        phi.gradient = [gradient = C.gradient](const Bundle& q) { return gradient(negate(q)); };
    return phi;
}

CostFunction cost_from_potential_level(const PotentialFunction& phi, double level,
                                       const RootFindConfig& cfg_in) {
    if (!std::isfinite(level)) throw DomainError("cost_from_potential: non-finite target level");
    RootFindConfig cfg = cfg_in;
    cfg.rel_tol = std::min(cfg.rel_tol, 1e-13);

    const bool positive = phi.domain == Domain::PositiveOrthant;
    auto solve_level = [phi_value = phi.value, level, cfg, positive,
                        n = phi.n](const Bundle& q) -> double {
        if (static_cast<int>(q.size()) != n) throw DomainError("cost: wrong bundle length");
        if (!all_finite(q)) throw DomainError("cost: non-finite bundle");
        auto along_diagonal = [&](double c) -> double {
            Bundle x(q.size());
            for (std::size_t i = 0; i < q.size(); ++i) x[i] = c - q[i];
            try {
                return phi_value(x);
            } catch (const DomainError&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
        if (positive) {
            double floor = max_element(q);
            double lo = floor + 1e-9;
            double hi = lo + std::max(1.0, std::abs(lo));
            return solve_monotone_interval(along_diagonal, level, lo, hi, Direction::Increasing,
                                           cfg, {floor, std::nullopt});
        }
        double lo = min_element(q) - 1.0;
        double hi = max_element(q) + 1.0;
        return solve_monotone_interval(along_diagonal, level, lo, hi, Direction::Increasing, cfg);
    };

    CostFunction C;
    C.n = phi.n;
    C.family = "from-potential:" + phi.family;
    C.params = phi.params;
    C.params["level"] = level;
    C.value = solve_level;
    if (phi.gradient) {
        // Prices are the potential's gradient at the level crossing, normalized
        // to sum to one.
        C.gradient = [solve_level, phi_gradient = phi.gradient](const Bundle& q) {
            double c = solve_level(q);
            Bundle x(q.size());
            for (std::size_t i = 0; i < q.size(); ++i) x[i] = c - q[i];
            Bundle g = phi_gradient(x);
            double s = 0.0;
            for (double gi : g) s += gi;
            for (double& gi : g) gi /= s;
            return g;
        };
    }
    return C;
}

CostFunction cost_from_potential(const PotentialFunction& phi, const Bundle& q0,
                                 const RootFindConfig& cfg) {
    if (!phi.in_domain(q0)) throw DomainError("cost_from_potential: q0 outside potential domain");
    return cost_from_potential_level(phi, phi(q0), cfg);
}

PotentialFunction perspective_potential(const CostFunction& C, double shift,
                                        const RootFindConfig& cfg_in) {
    RootFindConfig cfg = cfg_in;
    cfg.rel_tol = std::min(cfg.rel_tol, 1e-13);
    auto cost = C.value;
    if (shift != 0.0)
        cost = [base = C.value, shift](const Bundle& q) { return base(q) + shift; };

    const double t = cost(Bundle(C.n, 0.0));
    if (!(t > 0.0)) {
        std::ostringstream os;
        os << "perspective_potential requires C(0) > 0, got " << t
           << "; supply a positive shift";
        throw SpecError(os.str());
    }

    PotentialFunction phi;
    phi.n = C.n;
    phi.domain = Domain::PositiveOrthant;
    phi.homogeneous = true;
    phi.family = "perspective-of:" + C.family;
    phi.params = C.params;
    if (shift != 0.0) phi.params["shift"] = shift;
    phi.value = [cost, t, cfg, n = C.n](const Bundle& q) -> double {
        if (static_cast<int>(q.size()) != n) throw DomainError("perspective: wrong bundle length");
        if (!is_strictly_positive(q))
            throw DomainError("perspective potential: reserves must be strictly positive");
        const double lo = min_element(q) / t;
        const double hi = max_element(q) / t;
        if (hi - lo <= 1e-14 * hi) return lo;  // q proportional to ones
        auto scaled = [&](double alpha) {
            Bundle x(q.size());
            for (std::size_t i = 0; i < q.size(); ++i) x[i] = -q[i] / alpha;
            return cost(x);
        };
        return solve_monotone_interval(scaled, 0.0, lo, hi, Direction::Increasing, cfg,
                                       {0.0, std::nullopt});
    };
    if (C.gradient) {
        phi.gradient = [value = phi.value, gradient = C.gradient](const Bundle& q) {
            double alpha = value(q);
            Bundle x(q.size());
            for (std::size_t i = 0; i < q.size(); ++i) x[i] = -q[i] / alpha;
            Bundle g = gradient(x);
            double denom = dot(g, q);
            Bundle out(q.size());
            for (std::size_t i = 0; i < q.size(); ++i) out[i] = alpha * g[i] / denom;
            return out;
        };
    }
    return phi;
}

}  // namespace levelset
