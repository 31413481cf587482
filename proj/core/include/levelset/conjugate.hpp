#pragma once

#include <functional>

#include "levelset/bundle.hpp"
#include "levelset/simplex.hpp"

namespace levelset {

/// Numeric convex conjugate of a generating function G over the probability
/// simplex: sup_p <p,q> - G(p). For two outcomes the supremum is located on a
/// grid (grid_resolution points) and refined by golden-section search around
/// the grid argmax; higher dimensions run projected coordinate ascent over
/// pairwise mass transfers. Throws SpecError for grid_resolution < 2.
double conjugate_on_simplex(const std::function<double(const SimplexPoint&)>& G, const Bundle& q,
                            int grid_resolution = 512);

/// The opposite conjugacy direction: recovers the generating function of a
/// ones-invariant cost, G(p) = sup_q <p,q> - cost(q). Ones-invariance pins the
/// supremum to the slice q_n = 0, leaving an (n-1)-dimensional concave
/// maximization solved by expanding golden-section (cyclically per coordinate
/// for n > 2). The returned callable is safe to share across threads.
std::function<double(const SimplexPoint&)> generating_from_cost(
    std::function<double(const Bundle&)> cost, int n);

}  // namespace levelset
