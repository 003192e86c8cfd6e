#include "repdyn/linalg.hpp"

#include "repdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <string>

namespace repdyn {

namespace {

void check_shape(const Mat& m) {
    if (m.rows() != m.cols())
        throw PreconditionError("matrix must be square, got " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
    if (m.rows() < kMinDim || m.rows() > kMaxDim)
        throw PreconditionError("matrix dimension " + std::to_string(m.rows()) +
                                " outside supported range [2, 16]");
    if (!m.allFinite()) throw NumericError("matrix has non-finite entries");
}

Eigen::JacobiSVD<Mat> svd_of(const Mat& m, unsigned options) {
    Eigen::JacobiSVD<Mat> svd(m, options);
    return svd;
}

// Log singular values assembled from m (upper half) and m^{-1} (lower half).
Vec paired_log_singular_values(const Mat& m, const Mat& inverse) {
    const int n = static_cast<int>(m.rows());
    const Vec top = svd_of(m, 0).singularValues();
    const Vec bottom = svd_of(inverse, 0).singularValues();
    const int upper = (n + 1) / 2;
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        double v = i < upper ? std::log(top[i]) : -std::log(bottom[n - 1 - i]);
        if (!std::isfinite(v))
            throw DegenerateInputError("numerically singular matrix: singular value " +
                                       std::to_string(i + 1) + " is zero or non-finite");
        out[i] = v;
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

Vec sorted_log_moduli(const Mat& m) {
    Eigen::EigenSolver<Mat> solver(m, false);
    if (solver.info() != Eigen::Success) throw NumericError("eigenvalue solver did not converge");
    const auto& ev = solver.eigenvalues();
    std::vector<double> logs(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) logs[i] = std::log(std::abs(ev[i]));
    std::stable_sort(logs.begin(), logs.end(), std::greater<>());
    Vec out(static_cast<Eigen::Index>(logs.size()));
    for (std::size_t i = 0; i < logs.size(); ++i) out[static_cast<Eigen::Index>(i)] = logs[i];
    return out;
}

void check_finite_spectrum(const Vec& v, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw DegenerateInputError(std::string("numerically singular matrix: ") + what + " " +
                                       std::to_string(i + 1) + " is zero or non-finite");
}

void check_gap(const SpectralVector& cartan, int p) {
    const int n = cartan.dim();
    if (p <= 0 || p >= n) return;
    const double log_ratio = cartan[p - 1] - cartan[p];
    const double relative_gap = -std::expm1(-log_ratio);
    if (relative_gap < kDegenerateGapTol)
        throw DegenerateGapError("degenerate singular value gap at index " + std::to_string(p) +
                                     " (relative gap " + std::to_string(relative_gap) + ")",
                                 relative_gap);
}

void check_count(int n, int p) {
    if (p < 1 || p > n)
        throw PreconditionError("subspace dimension " + std::to_string(p) + " outside [1, " +
                                std::to_string(n) + "]");
}

// Orthonormal basis of the complement of span(cols) where cols is orthonormal.
Mat complement_basis(const Mat& cols) {
    const Eigen::Index n = cols.rows();
    Eigen::HouseholderQR<Mat> qr(cols);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    return q.rightCols(n - cols.cols());
}

struct AngleData {
    Vec cosines;  // descending
    Vec sines;    // ascending, paired with cosines
};

// u has dim >= w's dim.
AngleData angle_data(const Mat& u, const Mat& w) {
    const Mat c = u.transpose() * w;
    const Mat r = w - u * c;
    AngleData out;
    out.cosines = svd_of(c, 0).singularValues();
    Vec s = svd_of(r, 0).singularValues();
    std::sort(s.begin(), s.end());
    out.sines = s;
    return out;
}

}  // namespace

// --- Matrix --------------------------------------------------------------

bool is_invertible(const Mat& m) {
    const double row_norm = m.rowwise().norm().maxCoeff();
    const double det = std::abs(m.fullPivLu().determinant());
    const double scale = std::pow(row_norm, static_cast<double>(m.rows()));
    return std::isfinite(det) && det > kInvertibilityTol * scale && det > 0.0;
}

Matrix::Matrix(Mat m) : m_(std::move(m)) {
    check_shape(m_);
    if (!is_invertible(m_)) throw DegenerateInputError("matrix is numerically singular");
}

Matrix::Matrix(Mat m, Unchecked) : m_(std::move(m)) { check_shape(m_); }

Matrix Matrix::trusted(Mat m) { return Matrix(std::move(m), Unchecked{}); }

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n)
            throw PreconditionError("row " + std::to_string(i) + " has " +
                                    std::to_string(rows[i].size()) + " entries, expected " +
                                    std::to_string(n));
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return Matrix(std::move(m));
}

Matrix Matrix::identity(int n) { return Matrix(Mat::Identity(n, n)); }

Matrix Matrix::diagonal(const std::vector<double>& entries) {
    Vec d(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) d[static_cast<Eigen::Index>(i)] = entries[i];
    return Matrix(Mat(d.asDiagonal()));
}

Matrix Matrix::rotation(double angle) {
    Mat r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return Matrix(std::move(r));
}

Matrix Matrix::inverse() const { return trusted(m_.fullPivLu().inverse()); }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw PreconditionError("dimension mismatch in matrix product");
    return Matrix::trusted(a.m_ * b.m_);
}

// --- SpectralVector ----------------------------------------------------------

std::string_view to_string(SpectralKind kind) {
    return kind == SpectralKind::cartan ? "cartan" : "jordan";
}

SpectralVector::SpectralVector(Vec values, SpectralKind kind)
    : values_(std::move(values)), kind_(kind) {
    for (Eigen::Index i = 0; i + 1 < values_.size(); ++i)
        if (!(values_[i] >= values_[i + 1]))
            throw PreconditionError("spectral vector entries must be nonincreasing");
}

// --- Subspace ----------------------------------------------------------------

Subspace::Subspace(Mat basis) : basis_(std::move(basis)) {
    if (basis_.cols() < 1 || basis_.cols() > basis_.rows())
        throw PreconditionError("subspace basis must have between 1 and n columns");
    const Mat gram = basis_.transpose() * basis_;
    const double err = (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (!(err <= 1e-10)) throw PreconditionError("subspace basis is not orthonormal");
}

Subspace Subspace::span(const Mat& vectors) {
    const Eigen::Index n = vectors.rows();
    const Eigen::Index k = vectors.cols();
    if (k < 1 || k > n) throw PreconditionError("span needs between 1 and n vectors");
    Eigen::ColPivHouseholderQR<Mat> qr(vectors);
    qr.setThreshold(1e-13);
    if (qr.rank() < k) throw DegenerateInputError("spanning vectors are linearly dependent");
    // Column pivoting permutes only the order; the span of the leading k
    // columns of Q is span(vectors).
    Mat q = qr.householderQ() * Mat::Identity(n, k);
    return Subspace(std::move(q));
}

Subspace Subspace::coordinate(int n, const std::vector<int>& axes) {
    Mat b = Mat::Zero(n, static_cast<Eigen::Index>(axes.size()));
    for (std::size_t j = 0; j < axes.size(); ++j) b(axes[j], static_cast<Eigen::Index>(j)) = 1.0;
    return Subspace(std::move(b));
}

Subspace Subspace::orthogonal_complement() const {
    if (dim() == ambient_dim()) throw PreconditionError("complement of the whole space is zero");
    return Subspace(complement_basis(basis_));
}

Subspace Subspace::image(const Mat& m) const { return span(m * basis_); }

// --- projections -------------------------------------------------------------

SpectralVector cartan_projection(const Matrix& m) {
    const Vec s = svd_of(m.data(), 0).singularValues();
    Vec out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) out[i] = std::log(s[i]);
    check_finite_spectrum(out, "singular value");
    return SpectralVector(std::move(out), SpectralKind::cartan);
}

SpectralVector cartan_projection(const Matrix& m, const Matrix& inverse) {
    if (m.dim() != inverse.dim()) throw PreconditionError("dimension mismatch");
    return SpectralVector(paired_log_singular_values(m.data(), inverse.data()),
                          SpectralKind::cartan);
}

SpectralVector jordan_projection(const Matrix& m) {
    Vec out = sorted_log_moduli(m.data());
    check_finite_spectrum(out, "eigenvalue modulus");
    return SpectralVector(std::move(out), SpectralKind::jordan);
}

SpectralVector jordan_projection(const Matrix& m, const Matrix& inverse) {
    if (m.dim() != inverse.dim()) throw PreconditionError("dimension mismatch");
    const int n = m.dim();
    const Vec top = sorted_log_moduli(m.data());
    const Vec bottom = sorted_log_moduli(inverse.data());
    const int upper = (n + 1) / 2;
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = i < upper ? top[i] : -bottom[n - 1 - i];
    check_finite_spectrum(out, "eigenvalue modulus");
    std::sort(out.begin(), out.end(), std::greater<>());
    return SpectralVector(std::move(out), SpectralKind::jordan);
}

namespace {

std::vector<std::vector<int>> subsets(int n, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> pick(static_cast<std::size_t>(size));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        out.push_back(pick);
        int i = size - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i) --i;
        if (i < 0) return out;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < size; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
}

Mat compound(const Mat& m, const std::vector<std::vector<int>>& index) {
    const auto c = static_cast<Eigen::Index>(index.size());
    const auto size = static_cast<Eigen::Index>(index.front().size());
    Mat out(c, c);
    Mat minor(size, size);
    for (Eigen::Index r = 0; r < c; ++r)
        for (Eigen::Index s = 0; s < c; ++s) {
            for (Eigen::Index a = 0; a < size; ++a)
                for (Eigen::Index b = 0; b < size; ++b)
                    minor(a, b) = m(index[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)],
                                    index[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)]);
            out(r, s) = minor.partialPivLu().determinant();
        }
    return out;
}

}  // namespace

SpectralVector cartan_projection_of_product(const std::vector<Matrix>& factors) {
    if (factors.empty()) throw PreconditionError("empty product");
    const int n = factors.front().dim();
    for (const auto& f : factors)
        if (f.dim() != n) throw PreconditionError("dimension mismatch");
    if (n > kMaxCompoundDim)
        throw SizeError("exterior powers above dimension " + std::to_string(kMaxCompoundDim) + " are too large");
    // partial[i] = log(s_1 ... s_i)
    std::vector<double> partial(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        const auto index = subsets(n, i);
        const auto c = static_cast<Eigen::Index>(index.size());
        Mat p = Mat::Identity(c, c);
        double log_scale = 0.0;
        for (const auto& f : factors) {
            p = p * compound(f.data(), index);
            const double top = p.cwiseAbs().maxCoeff();
            if (!(top > 0.0) || !std::isfinite(top))
                throw DegenerateInputError("numerically singular product");
            p /= top;
            log_scale += std::log(top);
        }
        partial[static_cast<std::size_t>(i)] = log_scale + std::log(svd_of(p, 0).singularValues()[0]);
    }
    Vec out(n);
    for (int i = 0; i < n; ++i)
        out[i] = partial[static_cast<std::size_t>(i) + 1] - partial[static_cast<std::size_t>(i)];
    check_finite_spectrum(out, "singular value");
    // Rounding can swap entries of equal singular values.
    std::sort(out.begin(), out.end(), std::greater<>());
    return SpectralVector(std::move(out), SpectralKind::cartan);
}

// --- singular subspaces ------------------------------------------------------

Subspace top_singular_subspace(const Matrix& m, int p) {
    const int n = m.dim();
    check_count(n, p);
    check_gap(cartan_projection(m), p);
    auto svd = svd_of(m.data(), Eigen::ComputeFullU);
    return Subspace(svd.matrixU().leftCols(p));
}

Subspace top_singular_subspace(const Matrix& m, const Matrix& inverse, int p) {
    const int n = m.dim();
    check_count(n, p);
    check_gap(cartan_projection(m, inverse), p);
    if (2 * p <= n) {
        auto svd = svd_of(m.data(), Eigen::ComputeFullU);
        return Subspace(svd.matrixU().leftCols(p));
    }
    // Complement of the n-p least expanded output directions of m, which are
    // the most expanded input directions of m^{-1}.
    auto svd = svd_of(inverse.data(), Eigen::ComputeFullV);
    return Subspace(complement_basis(svd.matrixV().leftCols(n - p)));
}

Subspace bottom_singular_subspace(const Matrix& m, int q) {
    return top_singular_subspace(m.inverse(), q);
}

Subspace bottom_singular_subspace(const Matrix& m, const Matrix& inverse, int q) {
    return top_singular_subspace(inverse, m, q);
}

SpectralVector opposition_involution(const SpectralVector& v) {
    const Vec& x = v.values();
    Vec out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = -x[x.size() - 1 - i];
    return SpectralVector(std::move(out), v.kind());
}

// --- angles ------------------------------------------------------------------

double principal_angle(const Subspace& u, const Subspace& w) {
    if (u.ambient_dim() != w.ambient_dim()) throw PreconditionError("ambient dimension mismatch");
    if (u.dim() + w.dim() > u.ambient_dim())
        throw PreconditionError("principal_angle requires dim u + dim w <= n");
    const bool u_big = u.dim() >= w.dim();
    const AngleData d = u_big ? angle_data(u.basis(), w.basis()) : angle_data(w.basis(), u.basis());
    return std::atan2(d.sines[0], d.cosines[0]);
}

double subspace_distance(const Subspace& u, const Subspace& w) {
    if (u.ambient_dim() != w.ambient_dim() || u.dim() != w.dim())
        throw PreconditionError("subspace_distance needs subspaces of equal dimension");
    const AngleData d = angle_data(u.basis(), w.basis());
    const Eigen::Index last = d.cosines.size() - 1;
    return std::atan2(d.sines[last], d.cosines[last]);
}

Subspace intersect(const Subspace& u, const Subspace& w, int dim, double* residual) {
    if (u.ambient_dim() != w.ambient_dim()) throw PreconditionError("ambient dimension mismatch");
    if (dim < 1 || dim > std::min(u.dim(), w.dim()))
        throw PreconditionError("intersection dimension out of range");
    const Mat c = u.basis().transpose() * w.basis();
    auto svd = svd_of(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat pu = u.basis() * svd.matrixU().leftCols(dim);
    const Mat pw = w.basis() * svd.matrixV().leftCols(dim);
    if (residual) {
        double worst = 0.0;
        for (int j = 0; j < dim; ++j) {
            const double s = (pu.col(j) - pw.col(j)).norm() / 2.0;
            const double cval = (pu.col(j) + pw.col(j)).norm() / 2.0;
            worst = std::max(worst, 2.0 * std::atan2(s, cval));
        }
        *residual = worst;
    }
    return Subspace::span(pu + pw);
}

bool is_ill_conditioned(const SpectralVector& cartan) {
    return cartan[0] - cartan[cartan.dim() - 1] > std::log(kConditionWarning);
}

}  // namespace repdyn
