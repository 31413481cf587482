#pragma once

#include <string>

#include "levelset/cost_function.hpp"
#include "levelset/potential_function.hpp"
#include "levelset/rng.hpp"

namespace levelset {

// Outcome of a randomized property sampler. `witness` describes the first
// violation found.
struct SamplerReport {
    bool passed = true;
    int trials = 0;
    double worst = 0.0;
    std::string witness;
};

// Sampling box for probe points; positive-orthant families draw log-uniform
// coordinates in [lo, hi], full-domain families draw signed coordinates.
struct SampleBox {
    double lo = 0.05;
    double hi = 8.0;
};

// Midpoint convexity: C((q+q')/2) <= (C(q)+C(q'))/2 + tol.
SamplerReport sample_convexity(const CostFunction& C, Rng& rng, int trials, double tol = 1e-9,
                               SampleBox box = {});

// q' >= q, q' != q implies C(q') > C(q) on sampled pairs.
SamplerReport sample_increasing_cost(const CostFunction& C, Rng& rng, int trials,
                                     SampleBox box = {});

// C(q + a*ones) = C(q) + a within tol.
SamplerReport sample_ones_invariance(const CostFunction& C, Rng& rng, int trials,
                                     double tol = 1e-9, SampleBox box = {});

// Runs all three Definition-style checks for a cost family.
SamplerReport check_cost_conformance(const CostFunction& C, Rng& rng, int trials,
                                     double tol = 1e-9, SampleBox box = {});

SamplerReport sample_increasing_potential(const PotentialFunction& phi, Rng& rng, int trials,
                                          SampleBox box = {});

// Superlevel-set midpoint test: phi(q) >= c and phi(q') >= c imply
// phi((q+q')/2) >= c - tol.
SamplerReport sample_quasiconcavity(const PotentialFunction& phi, Rng& rng, int trials,
                                    double tol = 1e-9, SampleBox box = {});

// Midpoint concavity (stronger than quasiconcavity; used for families that
// claim it).
SamplerReport sample_concavity(const PotentialFunction& phi, Rng& rng, int trials,
                               double tol = 1e-9, SampleBox box = {});

// phi(a q) = a phi(q) within rel_tol relative error, random a > 0, q > 0.
SamplerReport sample_homogeneity(const PotentialFunction& phi, Rng& rng, int trials,
                                 double rel_tol = 1e-9, SampleBox box = {});

}  // namespace levelset
