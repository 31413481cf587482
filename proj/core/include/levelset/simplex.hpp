#pragma once

#include <vector>

#include "levelset/bundle.hpp"

namespace levelset {

// A probability vector: entries nonnegative, summing to one within 1e-12.
struct SimplexPoint {
    std::vector<double> p;

    SimplexPoint() = default;
    explicit SimplexPoint(std::vector<double> probs);

    int n() const { return static_cast<int>(p.size()); }
    double operator[](std::size_t i) const { return p[i]; }
};

SimplexPoint uniform_simplex(int n);

// Two-outcome grid {(i/(m-1), 1-i/(m-1))}, endpoints included.
std::vector<SimplexPoint> simplex_grid_n2(int points);

}  // namespace levelset
