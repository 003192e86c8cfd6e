#pragma once
//
// Dense small-n linear algebra for representations into GL(n, R):
// Cartan and Jordan projections, singular subspaces and principal angles.
//
// All logarithmic spectra use the nonincreasing convention
// values[0] >= values[1] >= ... >= values[n-1].
//

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace repdyn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 16;

// |det| must exceed this times (max row norm)^n.
inline constexpr double kInvertibilityTol = 1e-12;
// (a_p - a_{p+1}) / a_p below this is treated as a degenerate gap.
inline constexpr double kDegenerateGapTol = 1e-9;
// a_1 / a_n above this triggers the ill-conditioning flag.
inline constexpr double kConditionWarning = 1e12;

// An invertible n x n real matrix, 2 <= n <= 16.
class Matrix {
public:
    // Validates shape, finiteness and invertibility.
    explicit Matrix(Mat m);

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(int n);
    static Matrix diagonal(const std::vector<double>& entries);
    static Matrix rotation(double angle);  // 2x2

    // Skips the determinant test; used for products of already validated
    // matrices, whose determinant may legitimately underflow the scale test.
    // Shape and finiteness are still enforced.
    static Matrix trusted(Mat m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& data() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    Matrix inverse() const;
    Matrix transpose() const { return trusted(m_.transpose()); }

    friend Matrix operator*(const Matrix& a, const Matrix& b);

private:
    struct Unchecked {};
    Matrix(Mat m, Unchecked);
    Mat m_;
};

bool is_invertible(const Mat& m);

enum class SpectralKind { cartan, jordan };

std::string_view to_string(SpectralKind kind);

// A point of the closed positive Weyl chamber (nonincreasing entries).
class SpectralVector {
public:
    SpectralVector(Vec values, SpectralKind kind);

    const Vec& values() const { return values_; }
    SpectralKind kind() const { return kind_; }
    int dim() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }

    double sum() const { return values_.sum(); }

private:
    Vec values_;
    SpectralKind kind_;
};

// k-dimensional subspace of R^n stored by an orthonormal basis (n x k).
class Subspace {
public:
    // basis columns must be orthonormal within 1e-10
    explicit Subspace(Mat basis);

    // Orthonormalized span of the columns; columns must be independent.
    static Subspace span(const Mat& vectors);
    static Subspace coordinate(int n, const std::vector<int>& axes);  // 0-based

    int dim() const { return static_cast<int>(basis_.cols()); }
    int ambient_dim() const { return static_cast<int>(basis_.rows()); }
    const Mat& basis() const { return basis_; }

    Subspace orthogonal_complement() const;
    Subspace image(const Mat& m) const;  // span of m * basis

private:
    Mat basis_;
};

// log singular values of m, nonincreasing.
SpectralVector cartan_projection(const Matrix& m);
// Same, using an independently accumulated inverse for the lower half of
// the spectrum, which keeps small singular values of long products accurate.
SpectralVector cartan_projection(const Matrix& m, const Matrix& inverse);
// log singular values of factors[0] * factors[1] * ..., from the top singular
// value of each exterior power of the product. Every entry keeps full
// relative accuracy however wide the spread. SizeError when n > kMaxCompoundDim.
inline constexpr int kMaxCompoundDim = 10;
SpectralVector cartan_projection_of_product(const std::vector<Matrix>& factors);

// log moduli of eigenvalues of m (with multiplicity), nonincreasing.
SpectralVector jordan_projection(const Matrix& m);
SpectralVector jordan_projection(const Matrix& m, const Matrix& inverse);

// U_p(m): span of the p left singular vectors with largest singular values.
Subspace top_singular_subspace(const Matrix& m, int p);
Subspace top_singular_subspace(const Matrix& m, const Matrix& inverse, int p);

// S_q(m) = U_q(m^{-1}): the q input directions m contracts most.
Subspace bottom_singular_subspace(const Matrix& m, int q);
Subspace bottom_singular_subspace(const Matrix& m, const Matrix& inverse, int q);

// (v_1..v_n) -> (-v_n, ..., -v_1)
SpectralVector opposition_involution(const SpectralVector& v);

// Smallest principal angle in [0, pi/2]; requires dim u + dim w <= n.
double principal_angle(const Subspace& u, const Subspace& w);
// Largest principal angle between equal-dimensional subspaces; zero iff equal.
double subspace_distance(const Subspace& u, const Subspace& w);

// Best `dim`-dimensional approximation of u ∩ w from principal vectors.
// `residual` receives the largest of the `dim` smallest principal angles.
Subspace intersect(const Subspace& u, const Subspace& w, int dim, double* residual = nullptr);

bool is_ill_conditioned(const SpectralVector& cartan);

}  // namespace repdyn
