#include "repdyn/errors.hpp"
#include "repdyn/linalg.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace repdyn;
using testing::diag;

namespace {

Matrix mat2(double a, double b, double c, double d) { return Matrix::from_rows({{a, b}, {c, d}}); }

}  // namespace

TEST_CASE("cartan projection of a diagonal matrix") {
    const auto v = cartan_projection(Matrix(diag({2.0, 1.0, 0.5})));
    CHECK(v.kind() == SpectralKind::cartan);
    CHECK(v[0] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(std::abs(v[1]) < 1e-14);
    CHECK(v[2] == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("cartan projection sorts and ignores sign") {
    const auto v = cartan_projection(Matrix(diag({-0.5, 3.0, 1.0})));
    CHECK(v[0] == doctest::Approx(std::log(3.0)));
    CHECK(std::abs(v[1]) < 1e-14);
    CHECK(v[2] == doctest::Approx(std::log(0.5)));
}

TEST_CASE("orthogonal matrices have zero cartan projection") {
    testing::Rng rng(11);
    for (int n : {2, 3, 5, 8}) {
        const auto v = cartan_projection(Matrix(testing::random_orthogonal(rng, n)));
        CHECK(v.values().cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("cartan projection of [[3,1],[1,1]]") {
    const auto v = cartan_projection(mat2(3, 1, 1, 1));
    const auto sv = testing::singular_values_2x2(3, 1, 1, 1);
    CHECK(std::abs(v[0] - std::log(sv[0])) < 1e-12);
    CHECK(std::abs(v[1] - std::log(sv[1])) < 1e-12);
    CHECK(std::abs(v[0] - std::log(2.0 + std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(v[1] - std::log(2.0 - std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(v.sum() - std::log(2.0)) < 1e-12);
}

TEST_CASE("jordan projection oracles") {
    SUBCASE("[[2,1],[1,1]]") {
        const auto v = jordan_projection(mat2(2, 1, 1, 1));
        CHECK(std::abs(v[0] - std::log((3.0 + std::sqrt(5.0)) / 2.0)) < 1e-12);
        CHECK(std::abs(v[1] - std::log((3.0 - std::sqrt(5.0)) / 2.0)) < 1e-12);
    }
    SUBCASE("identity") {
        CHECK(jordan_projection(Matrix::identity(4)).values().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("rotation by 30 degrees") {
        const auto v = jordan_projection(Matrix::rotation(std::numbers::pi / 6));
        CHECK(v.values().cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("complex pair counted with multiplicity") {
        // 2 * rotation (modulus 2 twice) plus a real 1/4
        Mat m = Mat::Zero(3, 3);
        m.topLeftCorner(2, 2) = 2.0 * testing::rotation_2d(1.0);
        m(2, 2) = 0.25;
        const auto v = jordan_projection(Matrix(m));
        CHECK(v[0] == doctest::Approx(std::log(2.0)));
        CHECK(v[1] == doctest::Approx(std::log(2.0)));
        CHECK(v[2] == doctest::Approx(std::log(0.25)));
    }
}

TEST_CASE("jordan projection of the inverse is the opposition involution") {
    const Matrix g = mat2(2, 1, 1, 1);
    const auto a = jordan_projection(g.inverse());
    const auto b = opposition_involution(jordan_projection(g));
    CHECK((a.values() - b.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("opposition involution") {
    const SpectralVector v(Vec{{3.0, 1.0, 0.0}}, SpectralKind::cartan);
    const auto w = opposition_involution(v);
    CHECK(w.values() == Vec{{0.0, -1.0, -3.0}});
    CHECK(opposition_involution(w).values() == v.values());

    const double l2 = std::log(2.0);
    const SpectralVector s(Vec{{l2, 0.0, -l2}}, SpectralKind::jordan);
    CHECK(opposition_involution(s).values() == s.values());
    CHECK(opposition_involution(s).kind() == SpectralKind::jordan);
}

TEST_CASE("spectral vectors must be nonincreasing") {
    CHECK_THROWS_AS(SpectralVector(Vec{{0.0, 1.0}}, SpectralKind::cartan), PreconditionError);
}

TEST_CASE("matrix validation") {
    CHECK_THROWS_AS(Matrix(Mat::Zero(2, 2)), DegenerateInputError);
    CHECK_THROWS_AS(Matrix(Mat::Identity(1, 1)), PreconditionError);
    CHECK_THROWS_AS(Matrix(Mat::Identity(17, 17)), PreconditionError);
    CHECK_THROWS_AS(Matrix(Mat::Identity(2, 3)), PreconditionError);
    Mat nan = Mat::Identity(2, 2);
    nan(0, 1) = std::nan("");
    CHECK_THROWS(Matrix(nan));
    CHECK_THROWS_AS(cartan_projection(Matrix::from_rows({{1, 2}, {2, 4 + 1e-15}})), DegenerateInputError);
    CHECK_NOTHROW(Matrix(diag({1e-3, 1e3})));
}

TEST_CASE("top and bottom singular subspaces of diag(3,2,1)") {
    const Matrix m(diag({3, 2, 1}));
    CHECK(subspace_distance(top_singular_subspace(m, 1), Subspace::coordinate(3, {0})) < 1e-12);
    CHECK(subspace_distance(top_singular_subspace(m, 2), Subspace::coordinate(3, {0, 1})) < 1e-12);
    CHECK(subspace_distance(bottom_singular_subspace(m, 2), Subspace::coordinate(3, {1, 2})) < 1e-12);
    CHECK(subspace_distance(bottom_singular_subspace(m, 1), Subspace::coordinate(3, {2})) < 1e-12);
}

TEST_CASE("singular subspaces of [[3,1],[1,1]]") {
    const Matrix m = mat2(3, 1, 1, 1);
    // m m^T = [[10, 4], [4, 2]]
    const double s1 = 2.0 + std::sqrt(2.0);
    const auto u = testing::symmetric_eigenvector_2x2(10, 4, 2, s1 * s1);
    const auto top = top_singular_subspace(m, 1);
    CHECK(std::abs(std::abs(top.basis()(0, 0) * u[0] + top.basis()(1, 0) * u[1]) - 1.0) < 1e-12);

    // S_1(m) = U_1(m^{-1}): the top eigenvector of (m^T m)^{-1}, i.e. the
    // bottom eigenvector of m^T m = [[10, 4], [4, 2]].
    const double s2 = 2.0 - std::sqrt(2.0);
    const auto w = testing::symmetric_eigenvector_2x2(10, 4, 2, s2 * s2);
    const auto bottom = bottom_singular_subspace(m, 1);
    CHECK(std::abs(std::abs(bottom.basis()(0, 0) * w[0] + bottom.basis()(1, 0) * w[1]) - 1.0) < 1e-12);
}

TEST_CASE("degenerate gaps are rejected") {
    CHECK_THROWS_AS(bottom_singular_subspace(Matrix::identity(3), 1), DegenerateGapError);
    CHECK_THROWS_AS(top_singular_subspace(Matrix(diag({2, 2, 1})), 1), DegenerateGapError);
    try {
        top_singular_subspace(Matrix(diag({2, 2, 1})), 1);
    } catch (const DegenerateGapError& e) {
        CHECK(e.relative_gap < kDegenerateGapTol);
    }
    CHECK_NOTHROW(top_singular_subspace(Matrix(diag({2, 2, 1})), 2));
}

TEST_CASE("principal angles") {
    const auto e1 = Subspace::coordinate(3, {0});
    CHECK(principal_angle(e1, Subspace::coordinate(3, {1, 2})) == doctest::Approx(std::numbers::pi / 2));
    CHECK(principal_angle(e1, e1) < 1e-7);
    const auto diag12 = Subspace::span(Mat{{1.0}, {1.0}, {0.0}});
    CHECK(principal_angle(e1, diag12) == doctest::Approx(std::numbers::pi / 4));
    CHECK_THROWS_AS(principal_angle(Subspace::coordinate(3, {0, 1}), Subspace::coordinate(3, {1, 2})),
                    PreconditionError);
}

TEST_CASE("intersection of subspaces") {
    const auto a = Subspace::coordinate(3, {0, 1});
    const auto b = Subspace::span(Mat{{0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}});
    double residual = 1.0;
    const auto c = intersect(a, b, 1, &residual);
    CHECK(residual < 1e-12);
    CHECK(subspace_distance(c, Subspace::coordinate(3, {1})) < 1e-12);
}

TEST_CASE("subspace basis must be orthonormal") {
    CHECK_THROWS_AS(Subspace(Mat{{1.0, 1.0}, {0.0, 1.0}}), PreconditionError);
    CHECK_THROWS_AS(Subspace::span(Mat{{1.0, 2.0}, {1.0, 2.0}}), DegenerateInputError);
    const auto s = Subspace::span(Mat{{2.0}, {0.0}});
    CHECK(s.orthogonal_complement().dim() == 1);
    CHECK(principal_angle(s, s.orthogonal_complement()) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("paired inverse keeps small singular values of long products") {
    const Matrix a(diag({8.0, 1.0, 0.125}));
    Mat p = Mat::Identity(3, 3), q = Mat::Identity(3, 3);
    for (int i = 0; i < 20; ++i) {
        p = p * a.data();
        q = a.inverse().data() * q;
    }
    const auto v = cartan_projection(Matrix::trusted(p), Matrix::trusted(q));
    CHECK(v[2] == doctest::Approx(-20 * std::log(8.0)).epsilon(1e-12));
    CHECK(is_ill_conditioned(v));
    CHECK_FALSE(is_ill_conditioned(cartan_projection(a)));
}

// Properties over random well-conditioned matrices.

TEST_CASE("property: cartan entries sum to log|det| and are nonincreasing") {
    testing::Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = rng.integer(2, 9);
        const Mat m = testing::random_well_conditioned(rng, n, 2.0);
        const auto v = cartan_projection(Matrix(m));
        INFO("trial " << trial << " n " << n);
        CHECK(std::abs(v.sum() - std::log(std::abs(m.determinant()))) < 1e-8);
        for (int i = 0; i + 1 < n; ++i) CHECK(v[i] >= v[i + 1]);
    }
}

TEST_CASE("property: cartan projection is bi-orthogonally invariant") {
    testing::Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(2, 7);
        const Mat m = testing::random_well_conditioned(rng, n, 2.0);
        const Mat q1 = testing::random_orthogonal(rng, n), q2 = testing::random_orthogonal(rng, n);
        const auto a = cartan_projection(Matrix(m)).values();
        const auto b = cartan_projection(Matrix(q1 * m * q2)).values();
        INFO("trial " << trial);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("property: jordan projection is conjugation invariant") {
    testing::Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(2, 6);
        const Mat m = testing::random_well_conditioned(rng, n, 1.0);
        const Mat h = testing::random_well_conditioned(rng, n, 0.5);
        const auto a = jordan_projection(Matrix(m)).values();
        const auto b = jordan_projection(Matrix(h * m * h.inverse())).values();
        INFO("trial " << trial);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("property: jordan projection is the limit of cartan(m^k)/k") {
    // With m = h d h^{-1}, each log singular value of m^k is within log cond(h)
    // of k log|d_i|.
    testing::Rng rng(9);
    constexpr int k = 64;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = rng.integer(2, 5);
        Mat d = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            const double modulus = std::exp(rng.uniform(-1.0, 1.0));
            d(i, i) = rng.integer(0, 1) ? modulus : -modulus;
        }
        const Mat h = testing::random_well_conditioned(rng, n, 0.5);
        const auto hs = Eigen::JacobiSVD<Mat>(h).singularValues();
        const double log_cond = std::log(hs[0] / hs[n - 1]);
        const Matrix m(h * d * h.inverse());
        const Vec c = cartan_projection_of_product(std::vector<Matrix>(k, m)).values() / k;
        const Vec j = jordan_projection(m).values();
        std::vector<double> expected;
        for (int i = 0; i < n; ++i) expected.push_back(std::log(std::abs(d(i, i))));
        std::sort(expected.begin(), expected.end(), std::greater<>());
        INFO("trial " << trial);
        for (int i = 0; i < n; ++i) {
            CHECK(j[i] == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-10));
            CHECK(std::abs(c[i] - j[i]) <= log_cond / k + 1e-9);
        }
    }
}

TEST_CASE("cartan projection of a product keeps the middle of a wide spectrum") {
    // Symmetric, so the singular values of m^64 are exactly 2^64, 1, 2^-64.
    testing::Rng rng(3);
    const Mat q = testing::random_orthogonal(rng, 3);
    const Matrix m(q * diag({2.0, 1.0, 0.5}) * q.transpose());
    const Vec c = cartan_projection_of_product(std::vector<Matrix>(64, m)).values();
    CHECK(c[0] == doctest::Approx(64 * std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(c[1]) < 1e-10);
    CHECK(c[2] == doctest::Approx(-64 * std::log(2.0)).epsilon(1e-12));

    std::vector<Matrix> factors;
    for (int i = 0; i < 3; ++i) factors.emplace_back(testing::random_well_conditioned(rng, 4, 1.0));
    const Matrix prod = factors[0] * factors[1] * factors[2];
    const Vec a = cartan_projection_of_product(factors).values();
    const Vec b = cartan_projection(prod).values();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(cartan_projection_of_product({}), PreconditionError);
    CHECK_THROWS_AS(cartan_projection_of_product({Matrix::identity(kMaxCompoundDim + 1)}), SizeError);
}

TEST_CASE("property: opposition involution is an exact involution") {
    testing::Rng rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.integer(2, 16);
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.uniform(-5, 5);
        std::sort(v.data(), v.data() + n, std::greater<>());
        const SpectralVector s(v, SpectralKind::jordan);
        CHECK(opposition_involution(opposition_involution(s)).values() == v);
    }
}

TEST_CASE("property: top singular subspace is invariant under right orthogonal action") {
    testing::Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(2, 7);
        const int p = rng.integer(1, n - 1);
        const Mat m = testing::random_well_conditioned(rng, n, 2.0);
        const Mat q = testing::random_orthogonal(rng, n);
        INFO("trial " << trial);
        CHECK(subspace_distance(top_singular_subspace(Matrix(m), p), top_singular_subspace(Matrix(m * q), p)) < 1e-8);
    }
}

TEST_CASE("property: principal angle agrees with an independent oracle") {
    testing::Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(2, 8);
        const int k = rng.integer(1, n - 1);
        const Mat a = testing::random_orthogonal(rng, n).leftCols(k);
        const Mat b = testing::random_orthogonal(rng, n).leftCols(k);
        CHECK(std::abs(subspace_distance(Subspace(a), Subspace(b)) - testing::span_distance(a, b)) < 1e-8);
    }
}
