#pragma once

#include <functional>
#include <optional>

#include "levelset/bundle.hpp"

namespace levelset {

struct RootFindConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_iter = 200;
    double bracket_growth = 2.0;
};

enum class Direction { Increasing, Decreasing };

// Hard limits the bracket expansion may not cross (domain edges). When the
// crossing cannot be straddled before a limit, the thrown BracketError carries
// the last feasible abscissa.
struct BracketLimits {
    std::optional<double> lo;
    std::optional<double> hi;
};

/// Solves f(x) = target for a continuous f that is strictly monotone in the
/// stated direction. The seed interval is grown geometrically until the target
/// is straddled, then bisection with secant acceleration runs until the
/// residual is within abs_tol or the interval collapses. The returned point
/// always satisfies |f(x) - target| <= 10 * abs_tol; otherwise ToleranceError.
double solve_monotone(const std::function<double(double)>& f, double target, double seed_lo,
                      double seed_hi, Direction direction, const RootFindConfig& cfg = {},
                      const BracketLimits& limits = {});

/// Variant that keeps refining until the bracket width reaches
/// rel_tol * |x| (or the floating-point floor) instead of stopping at the
/// first small residual. Needed when f is itself computed by an inner solve:
/// a small residual of a noisy or flat f does not pin x down, but a collapsed
/// bracket does. No residual assertion is made at the floating-point floor.
double solve_monotone_interval(const std::function<double(double)>& f, double target,
                               double seed_lo, double seed_hi, Direction direction,
                               const RootFindConfig& cfg = {}, const BracketLimits& limits = {});

/// Golden-section maximization of a unimodal function on [lo, hi].
/// Returns the abscissa of the maximum; `value` (if given) receives f there.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-12, int max_iter = 200, double* value = nullptr);

}  // namespace levelset
