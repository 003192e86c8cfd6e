#pragma once
//
// Convex hulls of small point clouds in R^d (d <= 16): vertex extraction,
// point-to-hull distance (Wolfe's minimum-norm-point method) and Hausdorff
// distance between hulls.
//

#include "repdyn/linalg.hpp"

#include <vector>

namespace repdyn {

struct Polytope {
    int ambient_dim = 0;
    int affine_dim = -1;        // -1 for the empty set
    std::vector<Vec> vertices;  // lexicographically sorted
};

// `tol` is relative to max(1, largest coordinate magnitude).
Polytope convex_hull(const std::vector<Vec>& points, double tol = 1e-10);

struct NearestPoint {
    double distance = 0.0;
    Vec point;
};

// Nearest point of conv(vertices) to x.
NearestPoint nearest_point(const std::vector<Vec>& vertices, const Vec& x);

double hausdorff_distance(const Polytope& a, const Polytope& b);

}  // namespace repdyn
