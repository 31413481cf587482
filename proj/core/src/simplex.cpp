#include "levelset/simplex.hpp"

#include <cmath>
#include <utility>

namespace levelset {

SimplexPoint::SimplexPoint(std::vector<double> probs) : p(std::move(probs)) {
    if (p.size() < 2) throw SpecError("simplex point needs at least 2 outcomes");
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw DomainError("simplex point has a negative entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("simplex point entries must sum to 1");
}

SimplexPoint uniform_simplex(int n) {
    return SimplexPoint(std::vector<double>(n, 1.0 / n));
}

std::vector<SimplexPoint> simplex_grid_n2(int points) {
    if (points < 2) throw SpecError("simplex grid needs at least 2 points");
    std::vector<SimplexPoint> grid;
    grid.reserve(points);
    for (int i = 0; i < points; ++i) {
        double p1 = static_cast<double>(i) / (points - 1);
        grid.push_back(SimplexPoint({p1, 1.0 - p1}));
    }
    return grid;
}

}  // namespace levelset
