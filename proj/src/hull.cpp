#include "repdyn/hull.hpp"

#include "repdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace repdyn {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Wolfe (1976), minimum-norm point of conv(P), P given as columns.
// Returns convex weights.
Vec min_norm_weights(const Mat& P) {
    const Eigen::Index m = P.cols();
    const double scale = std::max(1.0, P.colwise().squaredNorm().maxCoeff());
    const double eps = 1e-14 * scale;

    Eigen::Index start = 0;
    P.colwise().squaredNorm().minCoeff(&start);
    std::vector<Eigen::Index> active{start};
    std::vector<double> w{1.0};

    for (int major = 0; major < 1000; ++major) {
        Vec x = Vec::Zero(P.rows());
        for (std::size_t i = 0; i < active.size(); ++i) x += w[i] * P.col(active[i]);
        const Vec scores = P.transpose() * x;
        Eigen::Index j = 0;
        scores.minCoeff(&j);
        if (x.squaredNorm() - scores[j] <= eps) break;
        if (std::find(active.begin(), active.end(), j) != active.end()) break;
        active.push_back(j);
        w.push_back(0.0);

        for (int minor = 0; minor < 1000; ++minor) {
            const auto k = static_cast<Eigen::Index>(active.size());
            // affine minimizer: [Q^T Q  1; 1^T 0] [v; mu] = [0; 1]
            Mat K = Mat::Zero(k + 1, k + 1);
            for (Eigen::Index a = 0; a < k; ++a) {
                for (Eigen::Index b = 0; b < k; ++b) K(a, b) = P.col(active[a]).dot(P.col(active[b]));
                K(a, k) = 1.0;
                K(k, a) = 1.0;
            }
            Vec rhs = Vec::Zero(k + 1);
            rhs[k] = 1.0;
            const Vec sol = K.completeOrthogonalDecomposition().solve(rhs);
            const Vec v = sol.head(k);
            if ((v.array() > 1e-15).all()) {
                w.assign(v.data(), v.data() + k);
                break;
            }
            double theta = 1.0;
            for (Eigen::Index a = 0; a < k; ++a)
                if (v[a] <= 1e-15 && w[a] - v[a] > 0.0) theta = std::min(theta, w[a] / (w[a] - v[a]));
            for (Eigen::Index a = 0; a < k; ++a) w[a] = w[a] + theta * (v[a] - w[a]);
            std::vector<Eigen::Index> kept;
            std::vector<double> kept_w;
            for (Eigen::Index a = 0; a < k; ++a) {
                if (w[a] > 1e-15) {
                    kept.push_back(active[a]);
                    kept_w.push_back(w[a]);
                }
            }
            if (kept.empty()) {
                kept.push_back(active.back());
                kept_w.push_back(1.0);
            }
            const double total = std::accumulate(kept_w.begin(), kept_w.end(), 0.0);
            for (double& x_w : kept_w) x_w /= total;
            active = std::move(kept);
            w = std::move(kept_w);
        }
    }
    Vec weights = Vec::Zero(m);
    for (std::size_t i = 0; i < active.size(); ++i) weights[active[i]] = w[i];
    return weights;
}

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

NearestPoint nearest_point(const std::vector<Vec>& vertices, const Vec& x) {
    if (vertices.empty()) throw PreconditionError("nearest point of an empty hull");
    Mat P(x.size(), static_cast<Eigen::Index>(vertices.size()));
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].size() != x.size()) throw PreconditionError("hull and point dimensions differ");
        P.col(static_cast<Eigen::Index>(i)) = vertices[i] - x;
    }
    const Vec w = min_norm_weights(P);
    NearestPoint out;
    out.point = P * w;
    out.distance = out.point.norm();
    out.point += x;
    return out;
}

Polytope convex_hull(const std::vector<Vec>& input, double tol) {
    Polytope hull;
    if (input.empty()) return hull;
    const Eigen::Index d = input.front().size();
    hull.ambient_dim = static_cast<int>(d);

    std::vector<Vec> points = input;
    std::sort(points.begin(), points.end(), lex_less);
    double diameter = 0.0, magnitude = 1.0;
    for (const auto& p : points) {
        diameter = std::max(diameter, (p - points.front()).lpNorm<Eigen::Infinity>());
        magnitude = std::max(magnitude, p.lpNorm<Eigen::Infinity>());
    }
    const double eps = tol * magnitude;
    // Lexicographic neighbours need not be close, so compare against every kept point.
    std::vector<Vec> distinct;
    for (const auto& p : points) {
        const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                      [&](const Vec& q) { return (p - q).lpNorm<Eigen::Infinity>() <= eps; });
        if (!seen) distinct.push_back(p);
    }
    points = std::move(distinct);

    if (points.size() == 1 || diameter <= eps) {
        hull.affine_dim = 0;
        hull.vertices = {points.front()};
        return hull;
    }

    Vec centroid = Vec::Zero(d);
    for (const auto& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());
    Mat C(d, static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) C.col(static_cast<Eigen::Index>(i)) = points[i] - centroid;
    Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeThinU);
    const Vec& s = svd.singularValues();
    int dim = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > eps * std::sqrt(static_cast<double>(points.size()))) ++dim;
    hull.affine_dim = dim;

    if (dim == 1) {
        const Vec axis = svd.matrixU().col(0);
        std::size_t lo = 0, hi = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double t = axis.dot(points[i] - centroid);
            if (t < axis.dot(points[lo] - centroid)) lo = i;
            if (t > axis.dot(points[hi] - centroid)) hi = i;
        }
        hull.vertices = {points[lo], points[hi]};
    } else if (dim == 2) {
        // Andrew's monotone chain in the plane of the points.
        const Mat basis = svd.matrixU().leftCols(2);
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<Eigen::Vector2d> q(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) q[i] = basis.transpose() * (points[i] - centroid);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return q[a].x() < q[b].x() || (q[a].x() == q[b].x() && q[a].y() < q[b].y());
        });
        const double area_eps = eps * diameter;
        std::vector<std::size_t> chain(2 * order.size());
        std::size_t h = 0;
        for (std::size_t i : order) {
            while (h >= 2 && cross(q[chain[h - 2]], q[chain[h - 1]], q[i]) <= area_eps) --h;
            chain[h++] = i;
        }
        for (std::size_t idx = order.size() - 1, lower = h + 1; idx-- > 0;) {
            const std::size_t i = order[idx];
            while (h >= lower && cross(q[chain[h - 2]], q[chain[h - 1]], q[i]) <= area_eps) --h;
            chain[h++] = i;
        }
        for (std::size_t i = 0; i + 1 < h; ++i) hull.vertices.push_back(points[chain[i]]);
    } else {
        // Drop every point that lies in the hull of the points still kept.
        std::vector<Vec> kept = points;
        for (std::size_t i = 0; i < kept.size();) {
            std::vector<Vec> others;
            others.reserve(kept.size() - 1);
            for (std::size_t j = 0; j < kept.size(); ++j)
                if (j != i) others.push_back(kept[j]);
            if (nearest_point(others, kept[i]).distance <= eps)
                kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
            else
                ++i;
        }
        hull.vertices = std::move(kept);
    }
    std::sort(hull.vertices.begin(), hull.vertices.end(), lex_less);
    return hull;
}

double hausdorff_distance(const Polytope& a, const Polytope& b) {
    if (a.vertices.empty() || b.vertices.empty()) throw PreconditionError("Hausdorff distance of an empty hull");
    // The distance to a convex set is convex, so its maximum over a polytope
    // is attained at a vertex.
    double out = 0.0;
    for (const auto& v : a.vertices) out = std::max(out, nearest_point(b.vertices, v).distance);
    for (const auto& v : b.vertices) out = std::max(out, nearest_point(a.vertices, v).distance);
    return out;
}

}  // namespace repdyn
