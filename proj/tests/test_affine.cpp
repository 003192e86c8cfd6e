#include "repdyn/affine.hpp"
#include "repdyn/errors.hpp"
#include "repdyn/spectrum.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace repdyn;
using testing::diag;

namespace {

Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

Vec random_vec(testing::Rng& rng, int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(-2, 2);
    return v;
}

AffineMap random_affine(testing::Rng& rng, int n) {
    return AffineMap(Matrix(testing::random_well_conditioned(rng, n, 0.5)), random_vec(rng, n));
}

// Boost and rotation preserving x^2 + y^2 - z^2; every element of the
// identity component fixes a nonzero vector.
Mat boost(double t) {
    Mat m = Mat::Identity(3, 3);
    m(0, 0) = m(2, 2) = std::cosh(t);
    m(0, 2) = m(2, 0) = std::sinh(t);
    return m;
}

Mat spin(double theta) {
    Mat m = Mat::Identity(3, 3);
    m.topLeftCorner(2, 2) = testing::rotation_2d(theta);
    return m;
}

AffineGeneratorSet so21() {
    const Mat a = boost(std::log(3.0));
    const Mat b = spin(1.2) * boost(std::log(2.0)) * spin(-1.2);
    return AffineGeneratorSet({AffineMap(Matrix(a), vec({0, 1, 0})), AffineMap(Matrix(b), vec({1, 0, 0.5}))});
}

bool near(const AffineMap& f, const AffineMap& g, double tol) {
    return (f.linear.data() - g.linear.data()).norm() <= tol && (f.translation - g.translation).norm() <= tol;
}

constexpr int kOneThread = 1;

}  // namespace

TEST_CASE("composition examples") {
    const AffineMap tv(Matrix::identity(2), vec({1, 2}));
    const AffineMap tw(Matrix::identity(2), vec({3, -1}));
    CHECK(near(compose(tv, tw), AffineMap(Matrix::identity(2), vec({4, 1})), 0.0));

    const Matrix a = Matrix::from_rows({{2, 1}, {1, 1}});
    CHECK(near(compose(AffineMap(a, vec({0, 0})), AffineMap(a.inverse(), vec({0, 0}))), AffineMap::identity(2), 1e-15));

    const AffineMap f(Matrix::diagonal({2, 1}), vec({1, 0}));
    const AffineMap g(Matrix::identity(2), vec({3, 5}));
    CHECK(near(compose(f, g), AffineMap(Matrix::diagonal({2, 1}), vec({7, 5})), 0.0));

    CHECK_THROWS_AS(compose(f, AffineMap::identity(3)), PreconditionError);
    CHECK_THROWS_AS(AffineMap(Matrix::identity(2), vec({1, 2, 3})), PreconditionError);
}

TEST_CASE("property: composition is associative and projects to the linear product") {
    testing::Rng rng(81);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.integer(2, 5);
        const auto f = random_affine(rng, n), g = random_affine(rng, n), h = random_affine(rng, n);
        CHECK(near(compose(compose(f, g), h), compose(f, compose(g, h)), 1e-10));
        CHECK(compose(f, g).linear.data() == (f.linear * g.linear).data());
        const Vec x = random_vec(rng, n);
        CHECK((compose(f, g).apply(x) - f.apply(g.apply(x))).norm() < 1e-10);
        CHECK(near(compose(f, f.inverse()), AffineMap::identity(n), 1e-10));
    }
}

TEST_CASE("property: evaluation on words is a homomorphism to the linear parts") {
    testing::Rng rng(82);
    const AffineGeneratorSet gens({random_affine(rng, 3), random_affine(rng, 3)});
    for (int trial = 0; trial < 100; ++trial) {
        const Word w = random_word(2, rng.integer(0, 6), rng.bits());
        const AffineMap value = evaluate(w, gens);
        const Mat expected = testing::naive_product(gens.linear(), w.letters());
        CHECK((value.linear.data() - expected).norm() <= 1e-10 * expected.norm());
        AffineMap folded = AffineMap::identity(3);
        for (auto x : w.letters()) folded = compose(folded, gens.image(x));
        CHECK(near(value, folded, 1e-9 * (1 + folded.translation.norm())));
    }
}

TEST_CASE("normalized HKS determinant") {
    CHECK(normalized_hks_determinant(Mat::Identity(3, 3)) == 0.0);
    // det(diag(2,2) - I) = 1, |m| = 2
    CHECK(normalized_hks_determinant(diag({2.0, 2.0})) == doctest::Approx(1.0 / 9.0));
    CHECK(normalized_hks_determinant(boost(1.0)) < 1e-15);
}

TEST_CASE("HKS test on an SO(2,1) holonomy passes") {
    const auto report = hks_test(so21(), 8, ScanPolicy::exhaustive(), kOneThread);
    CHECK(report.pass);
    CHECK(report.max_normalized < 1e-10);
    CHECK_FALSE(report.truncated);
    REQUIRE(report.spheres.size() == 9);
    CHECK(report.spheres[0].length == 0);
    CHECK(report.spheres[0].max == 0.0);
}

TEST_CASE("HKS test on diag(2,2) fails at length one") {
    const AffineGeneratorSet gens({AffineMap(Matrix::diagonal({2, 2}), vec({1, 0}))});
    const auto report = hks_test(gens, 3, ScanPolicy::exhaustive(), kOneThread);
    CHECK_FALSE(report.pass);
    REQUIRE(report.worst_word);
    CHECK(report.spheres[1].max == doctest::Approx(1.0 / 9.0));
    CHECK(report.spheres[1].max > kHksTol);
    CHECK_THROWS_AS(hks_test(gens, 0, ScanPolicy::exhaustive(), kOneThread), PreconditionError);
}

TEST_CASE("property: HKS verdicts are invariant under affine conjugation") {
    testing::Rng rng(83);
    const AffineGeneratorSet fail({AffineMap(Matrix::diagonal({2, 1.5, 0.5}), vec({1, 0, 0}))});
    for (int trial = 0; trial < 5; ++trial) {
        const AffineMap h = random_affine(rng, 3);
        const auto pass = hks_test(so21().conjugated(h), 6, ScanPolicy::exhaustive(), kOneThread);
        CHECK(pass.pass);
        const auto conj = fail.conjugated(h);
        CHECK_FALSE(hks_test(conj, 2, ScanPolicy::exhaustive(), kOneThread).pass);
        // the determinant itself is a similarity invariant
        const Mat m = conj.image(Letter(0)).linear.data();
        CHECK(std::abs((m - Mat::Identity(3, 3)).determinant()) == doctest::Approx(0.25));
    }
}

TEST_CASE("eigenvalue norm one check") {
    const Mat a = diag({4.0, 0.25});
    const Mat r = testing::rotation_2d(std::numbers::pi / 4);
    Mat pa = Mat::Identity(3, 3), pb = Mat::Identity(3, 3);
    pa.topLeftCorner(2, 2) = a;
    pb.topLeftCorner(2, 2) = r * a * r.transpose();
    const auto padded = testing::gens_of({pa, pb});
    const auto ok = eigenvalue_norm_one_check(padded, 6, kNormOneDefaultTol, ScanPolicy::exhaustive(), kOneThread);
    CHECK(ok.pass);
    CHECK(ok.first_failure_length == 0);
    CHECK(ok.worst < 1e-12);

    const auto d23 = eigenvalue_norm_one_check(testing::gens_of({diag({2.0, 3.0})}), 4, kNormOneDefaultTol,
                                               ScanPolicy::exhaustive(), kOneThread);
    CHECK_FALSE(d23.pass);
    CHECK(d23.first_failure_length == 1);
    CHECK(d23.worst == doctest::Approx(4 * std::log(2.0)));

    const auto hyp = eigenvalue_norm_one_check(testing::gens_of({diag({4.0, 0.25})}), 3, kNormOneDefaultTol,
                                               ScanPolicy::exhaustive(), kOneThread);
    CHECK_FALSE(hyp.pass);
    CHECK(hyp.first_failure_length == 1);
}

TEST_CASE("a norm-one pass gives every cone sample a zero index") {
    const auto gens = so21().linear();
    const auto norm_one = eigenvalue_norm_one_check(gens, 5, kNormOneDefaultTol, ScanPolicy::exhaustive(), kOneThread);
    REQUIRE(norm_one.pass);
    const auto cone = sample_cone(gens, 5, ScanPolicy::exhaustive(), kOneThread);
    for (const auto& s : cone.samples) {
        const double tol = std::max(kNormOneDefaultTol / s.m, kZeroSampleTol);
        CHECK_FALSE(zero_index_interval(s.value, tol).indices.empty());
    }
}

TEST_CASE("bounded singular check") {
    const auto d3 = bounded_singular_check(testing::gens_of({diag({2.0, 1.0, 0.5})}), 6, ScanPolicy::exhaustive(),
                                           kOneThread);
    CHECK(d3.pass);
    CHECK(d3.c_hat < 1e-12);

    const auto rot = bounded_singular_check(testing::gens_of({testing::rotation_2d(0.4), testing::rotation_2d(1.3)}), 5,
                                            ScanPolicy::exhaustive(), kOneThread);
    CHECK(rot.pass);
    CHECK(rot.c_hat < 1e-12);

    const auto d23 = bounded_singular_check(testing::gens_of({diag({2.0, 3.0})}), 6, ScanPolicy::exhaustive(),
                                            kOneThread);
    CHECK_FALSE(d23.pass);
    for (const auto& s : d23.spheres) CHECK(s.max == doctest::Approx(s.length * std::log(2.0)));
    REQUIRE(d23.fit);
    CHECK(d23.fit->slope == doctest::Approx(std::log(2.0)));
    CHECK(d23.c_hat == doctest::Approx(6 * std::log(2.0)));
}
