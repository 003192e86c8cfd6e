#pragma once
//
// Test-side oracles and random generators. Nothing here calls into the
// library's numerical code, so checks against these are independent.
//

#include "repdyn/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(REPDYN_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Singular values of [[a, b], [c, d]] from the eigenvalues of m^T m.
inline std::array<double, 2> singular_values_2x2(double a, double b, double c, double d) {
    const double t = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
    return {std::sqrt((t + disc) / 2.0), std::sqrt(std::max(0.0, (t - disc) / 2.0))};
}

// Real eigenvalues of [[a, b], [c, d]], larger first; requires a real spectrum.
inline std::array<double, 2> real_eigenvalues_2x2(double a, double b, double c, double d) {
    const double tr = a + d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

// Unit eigenvector of the symmetric [[p, q], [q, r]] for eigenvalue mu.
inline std::array<double, 2> symmetric_eigenvector_2x2(double p, double q, double r, double mu) {
    double x = q, y = mu - p;
    if (std::abs(x) + std::abs(y) < 1e-14) {
        x = mu - r;
        y = q;
    }
    const double s = std::hypot(x, y);
    return {x / s, y / s};
}

inline repdyn::Mat rotation_2d(double angle) {
    repdyn::Mat r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Modified Gram-Schmidt on a Gaussian matrix.
inline repdyn::Mat random_orthogonal(Rng& rng, int n) {
    repdyn::Mat q(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) q(i, j) = rng.normal();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            double dot = 0.0;
            for (int r = 0; r < n; ++r) dot += q(r, i) * q(r, j);
            for (int r = 0; r < n; ++r) q(r, j) -= dot * q(r, i);
        }
        double norm = 0.0;
        for (int r = 0; r < n; ++r) norm += q(r, j) * q(r, j);
        norm = std::sqrt(norm);
        for (int r = 0; r < n; ++r) q(r, j) /= norm;
    }
    return q;
}

// q1 diag(e^{s_i}) q2 with |s_i| <= spread: condition number at most e^{2 spread}.
inline repdyn::Mat random_well_conditioned(Rng& rng, int n, double spread = 1.0) {
    repdyn::Mat d = repdyn::Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = std::exp(rng.uniform(-spread, spread));
    return random_orthogonal(rng, n) * d * random_orthogonal(rng, n);
}

inline repdyn::Mat diag(std::initializer_list<double> entries) {
    const std::vector<double> v(entries);
    repdyn::Mat m = repdyn::Mat::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v[i];
    return m;
}

inline repdyn::GeneratorSet gens_of(std::initializer_list<repdyn::Mat> mats) {
    std::vector<repdyn::Matrix> images;
    for (const auto& m : mats) images.emplace_back(m);
    return repdyn::GeneratorSet(std::move(images));
}

// Reduced word of length len, built letter by letter from rng.
inline std::vector<repdyn::Letter> random_letters(Rng& rng, int rank, int len) {
    std::vector<repdyn::Letter> out;
    while (static_cast<int>(out.size()) < len) {
        const repdyn::Letter x(rng.integer(0, 2 * rank - 1));
        if (!out.empty() && out.back() == x.inverse()) continue;
        out.push_back(x);
    }
    return out;
}

// Product of generator images, left to right, by plain loops.
inline repdyn::Mat naive_product(const repdyn::GeneratorSet& gens, const std::vector<repdyn::Letter>& letters) {
    const int n = gens.dim();
    repdyn::Mat p = repdyn::Mat::Identity(n, n);
    for (auto x : letters) {
        const repdyn::Mat& g = gens.image(x).data();
        repdyn::Mat next = repdyn::Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) next(i, j) += p(i, l) * g(l, j);
        p = next;
    }
    return p;
}

// Tree distance by brute force: free reduction of u^{-1} v.
inline std::size_t naive_tree_distance(const std::vector<repdyn::Letter>& u, const std::vector<repdyn::Letter>& v) {
    std::vector<repdyn::Letter> w;
    for (auto it = u.rbegin(); it != u.rend(); ++it) w.push_back(it->inverse());
    for (auto x : v) {
        if (!w.empty() && w.back() == x.inverse())
            w.pop_back();
        else
            w.push_back(x);
    }
    return w.size();
}

inline std::size_t count_reduced_words(int rank, int length) {
    std::size_t count = 0;
    std::vector<int> word(static_cast<std::size_t>(length), 0);
    const int alphabet = 2 * rank;
    std::size_t total = 1;
    for (int i = 0; i < length; ++i) total *= static_cast<std::size_t>(alphabet);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        bool reduced = true;
        for (int i = 0; i < length; ++i) {
            word[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(alphabet));
            c /= static_cast<std::size_t>(alphabet);
            if (i > 0 && (word[static_cast<std::size_t>(i)] ^ 1) == word[static_cast<std::size_t>(i - 1)]) reduced = false;
        }
        if (reduced) ++count;
    }
    return count;
}

// Largest principal angle between column spans, via the smallest singular
// value of the cross-Gram matrix of orthonormalized bases.
inline double span_distance(const repdyn::Mat& a, const repdyn::Mat& b) {
    const Eigen::HouseholderQR<repdyn::Mat> qa(a), qb(b);
    const repdyn::Mat ua = qa.householderQ() * repdyn::Mat::Identity(a.rows(), a.cols());
    const repdyn::Mat ub = qb.householderQ() * repdyn::Mat::Identity(b.rows(), b.cols());
    const double s = Eigen::JacobiSVD<repdyn::Mat>(ua.transpose() * ub).singularValues().minCoeff();
    return std::acos(std::min(1.0, s));
}

}  // namespace testing
