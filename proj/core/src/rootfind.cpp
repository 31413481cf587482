#include "levelset/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace levelset {

namespace {

std::string describe(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

namespace {

double solve_monotone_impl(const std::function<double(double)>& f, double target, double seed_lo,
                           double seed_hi, Direction direction, const RootFindConfig& cfg,
                           const BracketLimits& limits, bool interval_mode) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || cfg.max_iter < 1 ||
        !(cfg.bracket_growth > 1.0))
        throw SpecError("invalid root-find configuration");

    const double sign = direction == Direction::Increasing ? 1.0 : -1.0;
    // g is increasing through zero at the solution.
    auto g = [&](double x) { return sign * (f(x) - target); };

    double lo = std::min(seed_lo, seed_hi);
    double hi = std::max(seed_lo, seed_hi);
    if (limits.lo && lo < *limits.lo) lo = *limits.lo;
    if (limits.hi && hi > *limits.hi) hi = *limits.hi;

    const auto accept_point = [&](double gval) {
        return interval_mode ? gval == 0.0 : std::abs(gval) <= cfg.abs_tol;
    };

    double glo = g(lo);
    double ghi = g(hi);
    if (std::isnan(glo) || std::isnan(ghi))
        throw BracketError("monotone solve: seed evaluates to NaN", lo);
    if (accept_point(glo)) return lo;
    if (accept_point(ghi)) return hi;

    // Expand until g(lo) < 0 < g(hi). A hard limit is approached geometrically.
    double width = std::max(hi - lo, 1e-12 * (1.0 + std::abs(lo)));
    int expansions = 0;
    while (!(glo < 0.0 && ghi > 0.0)) {
        if (++expansions > cfg.max_iter) {
            std::ostringstream os;
            os << "monotone solve: could not straddle target " << describe(target) << " from ["
               << describe(lo) << ", " << describe(hi) << "]";
            throw BracketError(os.str(), glo < 0.0 ? hi : lo);
        }
        width *= cfg.bracket_growth;
        if (glo > 0.0) {
            // crossing lies below lo
            hi = lo;
            ghi = glo;
            double next = lo - width;
            if (limits.lo) {
                double gap = lo - *limits.lo;
                double resolution =
                    std::max(4.0 * std::numeric_limits<double>::epsilon() * std::abs(*limits.lo),
                             1e-300);
                // Interval callers accept a crossing pinned to the limit when
                // the first representable point above it already overshoots.
                if (interval_mode && gap <= resolution) return lo;
                if (lo <= *limits.lo || gap <= resolution) {
                    std::ostringstream os;
                    os << "monotone solve: target " << describe(target)
                       << " unreachable above lower limit " << describe(*limits.lo);
                    throw BracketError(os.str(), lo);
                }
                next = std::max(next, *limits.lo + gap / cfg.bracket_growth);
            }
            lo = next;
            glo = g(lo);
            if (std::isnan(glo)) throw BracketError("monotone solve: expansion hit NaN", hi);
            if (accept_point(glo)) return lo;
        } else {
            // crossing lies above hi
            lo = hi;
            glo = ghi;
            double next = hi + width;
            if (limits.hi) {
                if (hi >= *limits.hi) {
                    std::ostringstream os;
                    os << "monotone solve: target " << describe(target)
                       << " unreachable below upper limit " << describe(*limits.hi);
                    throw BracketError(os.str(), hi);
                }
                next = std::min(next, *limits.hi - (*limits.hi - hi) / cfg.bracket_growth);
            }
            hi = next;
            ghi = g(hi);
            if (std::isnan(ghi)) throw BracketError("monotone solve: expansion hit NaN", lo);
            if (accept_point(ghi)) return hi;
        }
    }

    // Bisection with secant acceleration inside [lo, hi]. The secant candidate
    // is taken from the bracket endpoints when both are finite and is rejected
    // whenever it falls too close to an endpoint, so the interval provably
    // shrinks and a stalled secant degrades to plain bisection.
    double x = 0.5 * (lo + hi);
    bool prefer_secant = true;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        double cand = std::numeric_limits<double>::quiet_NaN();
        if (prefer_secant && std::isfinite(glo) && std::isfinite(ghi) && ghi > glo) {
            double xs = lo - glo * (hi - lo) / (ghi - glo);
            double margin = 0.01 * (hi - lo);
            if (xs > lo + margin && xs < hi - margin) cand = xs;
        }
        x = std::isnan(cand) ? 0.5 * (lo + hi) : cand;

        double gx = g(x);
        if (std::isnan(gx)) throw BracketError("monotone solve: interior NaN", lo);
        if (!interval_mode && std::abs(gx) <= cfg.abs_tol) return x;
        if (gx == 0.0) return x;
        if (gx < 0.0) {
            lo = x;
            glo = gx;
        } else {
            hi = x;
            ghi = gx;
        }
        // Alternate so two secant steps in a row cannot stall the bracket.
        prefer_secant = !prefer_secant;

        const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) break;
        if (interval_mode) {
            if (hi - lo <= cfg.rel_tol * std::abs(x)) return 0.5 * (lo + hi);
        } else if (hi - lo <= cfg.rel_tol * std::abs(x) && std::abs(gx) <= 10.0 * cfg.abs_tol) {
            return x;
        }
    }

    const double xfinal = 0.5 * (lo + hi);
    if (interval_mode) return xfinal;
    const double residual = std::abs(f(xfinal) - target);
    if (residual > 10.0 * cfg.abs_tol) {
        std::ostringstream os;
        os << "monotone solve: residual " << describe(residual) << " above tolerance at x="
           << describe(xfinal);
        throw ToleranceError(os.str());
    }
    return xfinal;
}

}  // namespace

double solve_monotone(const std::function<double(double)>& f, double target, double seed_lo,
                      double seed_hi, Direction direction, const RootFindConfig& cfg,
                      const BracketLimits& limits) {
    return solve_monotone_impl(f, target, seed_lo, seed_hi, direction, cfg, limits, false);
}

double solve_monotone_interval(const std::function<double(double)>& f, double target,
                               double seed_lo, double seed_hi, Direction direction,
                               const RootFindConfig& cfg, const BracketLimits& limits) {
    return solve_monotone_impl(f, target, seed_lo, seed_hi, direction, cfg, limits, true);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol,
                  int max_iter, double* value) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = f(xm);
    if (value) *value = fm;
    return xm;
}

}  // namespace levelset
