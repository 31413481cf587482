#include "levelset/conformance.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace levelset {

namespace {

std::string describe_point(const Bundle& q) {
    std::ostringstream os;
    os.precision(12);
    os << "(";
    for (std::size_t i = 0; i < q.size(); ++i) os << (i ? "," : "") << q[i];
    os << ")";
    return os.str();
}

Bundle draw(Rng& rng, int n, Domain domain, const SampleBox& box) {
    return domain == Domain::PositiveOrthant ? rng.positive_bundle(n, box.lo, box.hi)
                                             : rng.signed_bundle(n, box.lo, box.hi);
}

Bundle midpoint(const Bundle& a, const Bundle& b) {
    Bundle m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
    return m;
}

// Perturb q upward in a random nonempty coordinate subset.
Bundle bump(Rng& rng, const Bundle& q) {
    Bundle out = q;
    bool bumped = false;
    for (double& x : out) {
        if (rng.coin()) {
            x += rng.log_uniform(1e-3, 1.0);
            bumped = true;
        }
    }
    if (!bumped) out[0] += rng.log_uniform(1e-3, 1.0);
    return out;
}

}  // namespace

SamplerReport sample_convexity(const CostFunction& C, Rng& rng, int trials, double tol,
                               SampleBox box) {
    SamplerReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Bundle a = rng.signed_bundle(C.n, box.lo, box.hi);
        Bundle b = rng.signed_bundle(C.n, box.lo, box.hi);
        double gap = C(midpoint(a, b)) - 0.5 * (C(a) + C(b));
        rep.worst = std::max(rep.worst, gap);
        if (gap > tol) {
            rep.passed = false;
            rep.witness = "midpoint convexity violated at " + describe_point(a) + " / " +
                          describe_point(b);
            return rep;
        }
    }
    return rep;
}

SamplerReport sample_increasing_cost(const CostFunction& C, Rng& rng, int trials, SampleBox box) {
    SamplerReport rep;
    rep.trials = trials;
    rep.worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        Bundle q = rng.signed_bundle(C.n, box.lo, box.hi);
        Bundle up = bump(rng, q);
        double diff = C(up) - C(q);
        rep.worst = std::min(rep.worst, diff);
        if (!(diff > 0.0)) {
            rep.passed = false;
            rep.witness = "not increasing from " + describe_point(q) + " to " + describe_point(up);
            return rep;
        }
    }
    return rep;
}

SamplerReport sample_ones_invariance(const CostFunction& C, Rng& rng, int trials, double tol,
                                     SampleBox box) {
    SamplerReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Bundle q = rng.signed_bundle(C.n, box.lo, box.hi);
        double a = (rng.coin() ? 1.0 : -1.0) * rng.log_uniform(1e-3, 10.0);
        Bundle shifted = q;
        for (double& x : shifted) x += a;
        double err = std::abs(C(shifted) - (C(q) + a));
        rep.worst = std::max(rep.worst, err);
        if (err > tol) {
            rep.passed = false;
            rep.witness = "ones-invariance off by " + std::to_string(err) + " at " +
                          describe_point(q);
            return rep;
        }
    }
    return rep;
}

SamplerReport check_cost_conformance(const CostFunction& C, Rng& rng, int trials, double tol,
                                     SampleBox box) {
    SamplerReport rep = sample_convexity(C, rng, trials, tol, box);
    if (!rep.passed) return rep;
    SamplerReport inc = sample_increasing_cost(C, rng, trials, box);
    if (!inc.passed) return inc;
    SamplerReport ones = sample_ones_invariance(C, rng, trials, tol, box);
    ones.trials = trials * 3;
    return ones;
}

SamplerReport sample_increasing_potential(const PotentialFunction& phi, Rng& rng, int trials,
                                          SampleBox box) {
    SamplerReport rep;
    rep.trials = trials;
    rep.worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        Bundle q = draw(rng, phi.n, phi.domain, box);
        Bundle up = bump(rng, q);
        double diff = phi(up) - phi(q);
        rep.worst = std::min(rep.worst, diff);
        if (!(diff > 0.0)) {
            rep.passed = false;
            rep.witness = "not increasing from " + describe_point(q) + " to " + describe_point(up);
            return rep;
        }
    }
    return rep;
}

SamplerReport sample_quasiconcavity(const PotentialFunction& phi, Rng& rng, int trials, double tol,
                                    SampleBox box) {
    SamplerReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Bundle a = draw(rng, phi.n, phi.domain, box);
        Bundle b = draw(rng, phi.n, phi.domain, box);
        double c = std::min(phi(a), phi(b));
        double vm = phi(midpoint(a, b));
        rep.worst = std::max(rep.worst, c - vm);
        if (vm < c - tol) {
            rep.passed = false;
            rep.witness = "superlevel midpoint fails at " + describe_point(a) + " / " +
                          describe_point(b);
            return rep;
        }
    }
    return rep;
}

SamplerReport sample_concavity(const PotentialFunction& phi, Rng& rng, int trials, double tol,
                               SampleBox box) {
    SamplerReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Bundle a = draw(rng, phi.n, phi.domain, box);
        Bundle b = draw(rng, phi.n, phi.domain, box);
        double gap = 0.5 * (phi(a) + phi(b)) - phi(midpoint(a, b));
        rep.worst = std::max(rep.worst, gap);
        if (gap > tol) {
            rep.passed = false;
            rep.witness = "midpoint concavity violated at " + describe_point(a) + " / " +
                          describe_point(b);
            return rep;
        }
    }
    return rep;
}

SamplerReport sample_homogeneity(const PotentialFunction& phi, Rng& rng, int trials,
                                 double rel_tol, SampleBox box) {
    SamplerReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Bundle q = rng.positive_bundle(phi.n, box.lo, box.hi);
        double a = rng.log_uniform(0.1, 10.0);
        double lhs = phi(scale(a, q));
        double rhs = a * phi(q);
        double err = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        rep.worst = std::max(rep.worst, err);
        if (err > rel_tol) {
            rep.passed = false;
            rep.witness = "homogeneity off by " + std::to_string(err) + " at " + describe_point(q);
            return rep;
        }
    }
    return rep;
}

}  // namespace levelset
