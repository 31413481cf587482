#include "levelset/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levelset/rootfind.hpp"

namespace levelset {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double conjugate_n2(const std::function<double(const SimplexPoint&)>& G, const Bundle& q,
                    int grid_resolution) {
    auto objective = [&](double p1) {
        p1 = std::clamp(p1, 0.0, 1.0);
        SimplexPoint p({p1, 1.0 - p1});
        double g = G(p);
        if (std::isnan(g)) return kNegInf;
        return p1 * q[0] + (1.0 - p1) * q[1] - g;
    };

    int best = 0;
    double best_val = kNegInf;
    for (int i = 0; i < grid_resolution; ++i) {
        double p1 = static_cast<double>(i) / (grid_resolution - 1);
        double v = objective(p1);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = static_cast<double>(std::max(0, best - 1)) / (grid_resolution - 1);
    double hi = static_cast<double>(std::min(grid_resolution - 1, best + 1)) / (grid_resolution - 1);
    double refined = kNegInf;
    golden_max(objective, lo, hi, 1e-14, 300, &refined);
    return std::max(refined, best_val);
}

double conjugate_ascent(const std::function<double(const SimplexPoint&)>& G, const Bundle& q) {
    const int n = static_cast<int>(q.size());
    std::vector<double> p(n, 1.0 / n);
    auto value = [&](const std::vector<double>& probs) {
        double g = G(SimplexPoint(probs));
        if (std::isnan(g)) return kNegInf;
        double v = -g;
        for (int i = 0; i < n; ++i) v += probs[i] * q[i];
        return v;
    };

    double current = value(p);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double before = current;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                auto along = [&](double t) {
                    std::vector<double> probe = p;
                    probe[i] = std::clamp(probe[i] + t, 0.0, 1.0);
                    probe[j] = std::clamp(probe[j] - t, 0.0, 1.0);
                    double s = 0.0;
                    for (double x : probe) s += x;
                    for (double& x : probe) x /= s;
                    return value(probe);
                };
                double t = golden_max(along, -p[i], p[j], 1e-13, 200);
                std::vector<double> candidate = p;
                candidate[i] = std::clamp(candidate[i] + t, 0.0, 1.0);
                candidate[j] = std::clamp(candidate[j] - t, 0.0, 1.0);
                double s = 0.0;
                for (double x : candidate) s += x;
                for (double& x : candidate) x /= s;
                double v = value(candidate);
                if (v > current) {
                    p = candidate;
                    current = v;
                }
            }
        }
        if (current - before <= 1e-13 * (1.0 + std::abs(current))) break;
    }
    return current;
}

// Expanding triple search followed by golden-section: maximizes a concave h
// over the real line. Supremum-at-infinity cases (the maximand of a boundary
// report approaches its value asymptotically) stop once a doubling improves
// the incumbent by less than a relative tolerance, returning the plateau
// value.
double maximize_line(const std::function<double(double)>& h) {
    double step = 1.0;
    double mid = 0.0, a = -step, b = step;
    double hm = h(mid), ha = h(a), hb = h(b);
    int expansions = 0;
    while ((hb > hm || ha > hm) && expansions < 120) {
        double incumbent = hm;
        if (hb > hm) {
            a = mid;
            ha = hm;
            mid = b;
            hm = hb;
            step *= 2.0;
            b = mid + step;
            hb = h(b);
        } else {
            b = mid;
            hb = hm;
            mid = a;
            hm = ha;
            step *= 2.0;
            a = mid - step;
            ha = h(a);
        }
        ++expansions;
        if (hm - incumbent <= 1e-13 * (1.0 + std::abs(hm))) break;
    }
    double best = std::max({ha, hm, hb});
    double refined = kNegInf;
    golden_max(h, a, b, 1e-13, 300, &refined);
    return std::max(best, refined);
}

}  // namespace

double conjugate_on_simplex(const std::function<double(const SimplexPoint&)>& G, const Bundle& q,
                            int grid_resolution) {
    if (grid_resolution < 2) throw SpecError("conjugate grid resolution must be at least 2");
    if (q.size() < 2) throw SpecError("conjugate requires at least 2 assets");
    if (q.size() == 2) return conjugate_n2(G, q, grid_resolution);
    return conjugate_ascent(G, q);
}

std::function<double(const SimplexPoint&)> generating_from_cost(
    std::function<double(const Bundle&)> cost, int n) {
    if (n < 2) throw SpecError("generating_from_cost requires at least 2 assets");
    if (n == 2) {
        return [cost = std::move(cost)](const SimplexPoint& p) {
            auto h = [&](double t) { return p[0] * t - cost(Bundle{t, 0.0}); };
            return maximize_line(h);
        };
    }
    return [cost = std::move(cost), n](const SimplexPoint& p) {
        Bundle q(n, 0.0);
        double current = dot(q, p.p) - cost(q);
        for (int sweep = 0; sweep < 100; ++sweep) {
            double before = current;
            for (int i = 0; i < n - 1; ++i) {
                auto h = [&](double t) {
                    Bundle probe = q;
                    probe[i] = t;
                    return dot(probe, p.p) - cost(probe);
                };
                double ti = golden_max(h, q[i] - 8.0, q[i] + 8.0, 1e-12, 200);
                Bundle updated = q;
                updated[i] = ti;
                double v = dot(updated, p.p) - cost(updated);
                if (v > current) {
                    q = updated;
                    current = v;
                }
            }
            if (current - before <= 1e-12 * (1.0 + std::abs(current))) break;
        }
        return current;
    };
}

}  // namespace levelset
