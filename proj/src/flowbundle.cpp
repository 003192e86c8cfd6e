#include "repdyn/flowbundle.hpp"

#include "repdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace repdyn {

CocycleTrajectory::CocycleTrajectory(const GeneratorSet& gens, FlowLineWindow line)
    : gens_(gens), line_(std::move(line)) {
    if (line_.rank() != gens_.rank()) throw PreconditionError("flow line alphabet does not match generators");
    const int n = gens_.dim();
    forward_.push_back(Mat::Identity(n, n));
    forward_inv_.push_back(Mat::Identity(n, n));
    for (int t = 0; t < line_.future(); ++t) {
        const Matrix& g = gens_.image(line_.at(t));
        const Matrix& g_inv = gens_.image(line_.at(t).inverse());
        Mat next = g.data() * forward_.back();
        Mat next_inv = forward_inv_.back() * g_inv.data();
        if (!next.allFinite() || !next_inv.allFinite()) {
            truncated_ = true;
            break;
        }
        forward_.push_back(std::move(next));
        forward_inv_.push_back(std::move(next_inv));
    }
    backward_.push_back(Mat::Identity(n, n));
    backward_inv_.push_back(Mat::Identity(n, n));
    for (int t = 0; t < line_.past(); ++t) {
        const Letter x = line_.at(-t - 1);
        Mat next = gens_.image(x.inverse()).data() * backward_.back();
        Mat next_inv = backward_inv_.back() * gens_.image(x).data();
        if (!next.allFinite() || !next_inv.allFinite()) {
            truncated_ = true;
            break;
        }
        backward_.push_back(std::move(next));
        backward_inv_.push_back(std::move(next_inv));
    }
}

const Mat& CocycleTrajectory::product(int t) const {
    if (t > future() || -t > past()) throw WindowBoundsError("time " + std::to_string(t) + " outside trajectory");
    return t >= 0 ? forward_[static_cast<std::size_t>(t)] : backward_[static_cast<std::size_t>(-t)];
}

const Mat& CocycleTrajectory::product_inverse(int t) const {
    if (t > future() || -t > past()) throw WindowBoundsError("time " + std::to_string(t) + " outside trajectory");
    return t >= 0 ? forward_inv_[static_cast<std::size_t>(t)] : backward_inv_[static_cast<std::size_t>(-t)];
}

const Matrix& CocycleTrajectory::step(int t) const {
    if (t >= future() || -t > past()) throw WindowBoundsError("step " + std::to_string(t) + " outside trajectory");
    return gens_.image(line_.at(t));
}

CocycleTrajectory build_trajectory(const GeneratorSet& gens, const FlowLineWindow& line) {
    return CocycleTrajectory(gens, line);
}

// --- splitting ---------------------------------------------------------------

namespace {

struct Frames {
    Subspace v_plus, z_prime, theta, v_minus;
};

// forward map from -tb to 0 is Q = P(-tb)^{-1}; from 0 to tf it is P(tf).
Frames frames_at(const CocycleTrajectory& traj, int k, int tf, int tb) {
    const int n = traj.dim();
    const Matrix q = Matrix::trusted(traj.product_inverse(-tb));
    const Matrix q_inv = Matrix::trusted(traj.product(-tb));
    const Matrix p = Matrix::trusted(traj.product(tf));
    const Matrix p_inv = Matrix::trusted(traj.product_inverse(tf));
    return Frames{top_singular_subspace(q, q_inv, k), top_singular_subspace(q, q_inv, n - k),
                  bottom_singular_subspace(p, p_inv, n - k), bottom_singular_subspace(p, p_inv, k)};
}

void check_gap(const Mat& m, const Mat& inv, int k, int t) {
    const int n = static_cast<int>(m.rows());
    const auto s = cartan_projection(Matrix::trusted(m), Matrix::trusted(inv));
    for (int p : {k, n - k}) {
        const double rel = -std::expm1(-(s[p - 1] - s[p]));
        if (rel < kDegenerateGapTol)
            throw DegenerateGapError("singular values " + std::to_string(p) + " and " + std::to_string(p + 1) +
                                         " coincide at time " + std::to_string(t),
                                     rel, t);
    }
}

Mat hstack(const Mat& a, const Mat& b) {
    Mat out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

}  // namespace

SplittingEstimate estimate_splitting(const CocycleTrajectory& traj, int k) {
    const int n = traj.dim();
    if (k < 1 || 2 * k >= n) throw PreconditionError("splitting index must satisfy 1 <= k < n/2");
    const int tf = traj.future();
    const int tb = traj.past();
    if (tf < 1 || tb < 1) throw PreconditionError("splitting needs letters on both sides of the basepoint");

    for (int t = 1; t <= std::max(tf, tb); ++t) {
        if (t <= tf) check_gap(traj.product(t), traj.product_inverse(t), k, t);
        if (t <= tb) check_gap(traj.product_inverse(-t), traj.product(-t), k, -t);
    }

    const Frames full = frames_at(traj, k, tf, tb);
    const Frames early = frames_at(traj, k, std::max(1, (3 * tf) / 4), std::max(1, (3 * tb) / 4));

    double intersection_residual = 0.0;
    Subspace v_zero = intersect(full.z_prime, full.theta, n - 2 * k, &intersection_residual);
    Subspace v_zero_early = intersect(early.z_prime, early.theta, n - 2 * k);

    const double residual = std::max({subspace_distance(full.v_plus, early.v_plus),
                                      subspace_distance(v_zero, v_zero_early),
                                      subspace_distance(full.v_minus, early.v_minus)});

    double independence = std::numeric_limits<double>::infinity();
    const Subspace* parts[3] = {&full.v_plus, &v_zero, &full.v_minus};
    for (int i = 0; i < 3; ++i) {
        const Subspace& a = *parts[(i + 1) % 3];
        const Subspace& b = *parts[(i + 2) % 3];
        const Mat others = hstack(a.basis(), b.basis());
        Eigen::JacobiSVD<Mat> svd(others);
        const double floor = svd.singularValues().minCoeff();
        if (floor < kIndependenceTol) {
            independence = 0.0;
            break;
        }
        independence = std::min(independence, principal_angle(*parts[i], Subspace::span(others)));
    }
    if (independence <= kIndependenceTol)
        throw DegenerateGapError("splitting subspaces are not independent", independence);

    return SplittingEstimate{k,          n,        full.v_plus,  std::move(v_zero),
                             full.v_minus, full.z_prime, full.theta, residual,
                             intersection_residual, independence};
}

// --- rates -------------------------------------------------------------------

namespace {

// Orthonormal frame transport with positive-diagonal QR: m * frame = next * r.
void qr_step(const Mat& m, const Mat& frame, Mat& next, Mat& r) {
    Eigen::HouseholderQR<Mat> qr(m * frame);
    const auto cols = frame.cols();
    next = qr.householderQ() * Mat::Identity(frame.rows(), cols);
    r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < cols; ++i) {
        if (r(i, i) < 0.0) {
            r.row(i) *= -1.0;
            next.col(i) *= -1.0;
        }
    }
}

// Top (n-k) right singular frame of m_inv, ordered by singular value. The
// span is taken as the complement of the top-k left singular subspace of m,
// which stays accurate when m_inv is too ill-conditioned to resolve its small
// singular values; the order inside the span comes from m_inv.
Mat weak_left_frame(const Mat& m, const Mat& m_inv, int k) {
    Eigen::JacobiSVD<Mat> full(m, Eigen::ComputeFullU);
    const Mat span = full.matrixU().rightCols(m.rows() - k);
    Eigen::JacobiSVD<Mat> inner(m_inv * span, Eigen::ComputeFullV);
    return span * inner.matrixV();
}

// Singular values of the operator with matrix `m` from span(b0) to span(bt)
// (orthonormal bases) in the norm |h v|.
Vec restricted_singular_values(const Mat& m, const Mat& b0, const Mat& bt, const std::optional<Matrix>& h) {
    if (!h) return Eigen::JacobiSVD<Mat>(m).singularValues();
    Eigen::HouseholderQR<Mat> q0(h->data() * b0), qt(h->data() * bt);
    const auto d = b0.cols();
    const Mat s0 = q0.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    const Mat st = qt.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    const Mat a = st * m * s0.triangularView<Eigen::Upper>().solve(Mat::Identity(d, d));
    return Eigen::JacobiSVD<Mat>(a).singularValues();
}

LineFit fit_tail(const std::vector<double>& y) {
    const int last = static_cast<int>(y.size()) - 1;
    int first = (last + 2) / 3;
    if (last - first < 1) first = std::max(0, last - 1);
    std::vector<double> xs, ys;
    for (int t = first; t <= last; ++t) {
        xs.push_back(t);
        ys.push_back(y[static_cast<std::size_t>(t)]);
    }
    return fit_line(xs, ys);
}

}  // namespace

RateReport measure_rates(const CocycleTrajectory& traj, const SplittingEstimate& split,
                         const std::optional<Matrix>& fiber_norm) {
    const int n = traj.dim();
    const int k = split.k;
    const int z = n - 2 * k;
    const int tf = traj.future();
    const int tb = traj.past();
    if (split.n != n) throw PreconditionError("splitting and trajectory dimensions differ");
    if (tf < 2 || tb < 2) throw PreconditionError("rate measurement needs at least two steps each way");
    if (fiber_norm && fiber_norm->dim() != n) throw PreconditionError("fiber norm has the wrong dimension");

    // Forward transport from -tb to tf of an (n-k)-frame whose leading k
    // columns track V+; its span tracks V+ + V0. The initial frame is chosen
    // so that at time 0 it spans exactly split.v_plus and split.z_prime.
    std::vector<Mat> fz(static_cast<std::size_t>(tb + tf + 1));
    std::vector<Mat> rz(static_cast<std::size_t>(tb + tf));
    {
        fz[0] = weak_left_frame(traj.product(-tb), traj.product_inverse(-tb), k);
        for (int s = -tb; s < tf; ++s) {
            const auto i = static_cast<std::size_t>(s + tb);
            qr_step(traj.step(s).data(), fz[i], fz[i + 1], rz[i]);
        }
    }
    auto frame_z = [&](int s) -> const Mat& { return fz[static_cast<std::size_t>(s + tb)]; };
    auto step_z = [&](int s) -> const Mat& { return rz[static_cast<std::size_t>(s + tb)]; };

    // Backward transport from tf to 0 of an (n-k)-frame whose leading k
    // columns track V-; its span tracks V0 + V-.
    std::vector<Mat> ft(static_cast<std::size_t>(tf + 1));
    std::vector<Mat> rt(static_cast<std::size_t>(tf));
    {
        ft[static_cast<std::size_t>(tf)] = weak_left_frame(traj.product(tf), traj.product_inverse(tf), k);
        for (int s = tf - 1; s >= 0; --s) {
            const auto i = static_cast<std::size_t>(s);
            const Mat step_inv = traj.generators().image(traj.line().at(s).inverse()).data();
            qr_step(step_inv, ft[i + 1], ft[i], rt[i]);
        }
    }

    RateReport report;
    std::vector<double> plus_backward(static_cast<std::size_t>(tb + 1), 0.0);
    std::vector<double> minus_forward(static_cast<std::size_t>(tf + 1), 0.0);
    std::vector<double> zero_forward(static_cast<std::size_t>(tf + 1), 0.0);
    std::vector<double> upper(static_cast<std::size_t>(tf + 1), 0.0);
    std::vector<double> lower(static_cast<std::size_t>(tf + 1), 0.0);

    const Mat plus0 = frame_z(0).leftCols(k);
    const Mat minus0 = ft[0].leftCols(k);

    // V+ under the backward flow: P(-t) restricted is the inverse of the
    // transported block R_{-1} ... R_{-t}.
    Mat x = Mat::Identity(k, k);
    for (int t = 0; t <= tb; ++t) {
        if (t > 0) x = x * step_z(-t).topLeftCorner(k, k);
        const Mat m = x.triangularView<Eigen::Upper>().solve(Mat::Identity(k, k));
        const Vec sv = restricted_singular_values(m, plus0, frame_z(-t).leftCols(k), fiber_norm);
        plus_backward[static_cast<std::size_t>(t)] = std::log(sv.maxCoeff());
    }

    // V0(t) from the two transported frames; coordinates in the forward frame.
    auto zero_coords = [&](int t, Mat& basis) {
        basis = intersect(Subspace(frame_z(t)), Subspace(ft[static_cast<std::size_t>(t)]), z).basis();
        return Mat((frame_z(t).transpose() * basis).bottomRows(z));
    };
    Mat zero0_basis;
    const Mat c0 = zero_coords(0, zero0_basis);

    Mat y = Mat::Identity(k, k);   // R'_0 ... R'_{t-1}, V- block
    Mat w = Mat::Identity(z, z);   // R_{t-1} ... R_0, V0 block
    Mat u = Mat::Identity(k, k);   // R_{t-1} ... R_0, V+ block
    for (int t = 0; t <= tf; ++t) {
        if (t > 0) {
            y = y * rt[static_cast<std::size_t>(t - 1)].topLeftCorner(k, k);
            w = step_z(t - 1).bottomRightCorner(z, z) * w;
            u = step_z(t - 1).topLeftCorner(k, k) * u;
        }
        const Mat m_minus = y.triangularView<Eigen::Upper>().solve(Mat::Identity(k, k));
        const Vec sv_minus =
            restricted_singular_values(m_minus, minus0, ft[static_cast<std::size_t>(t)].leftCols(k), fiber_norm);

        Mat zero_t_basis;
        const Mat ct = zero_coords(t, zero_t_basis);
        const Mat m_zero = ct.fullPivLu().solve(w * c0);
        const Vec sv_zero = restricted_singular_values(m_zero, zero0_basis, zero_t_basis, fiber_norm);

        const Vec sv_plus = restricted_singular_values(u, plus0, frame_z(t).leftCols(k), fiber_norm);

        const auto i = static_cast<std::size_t>(t);
        minus_forward[i] = std::log(sv_minus.maxCoeff());
        zero_forward[i] = std::log(sv_zero.maxCoeff());
        upper[i] = std::log(sv_zero.maxCoeff()) - std::log(sv_plus.minCoeff());
        lower[i] = std::log(sv_minus.maxCoeff()) - std::log(sv_zero.minCoeff());
    }

    report.plus_fit = fit_tail(plus_backward);
    report.minus_fit = fit_tail(minus_forward);
    report.upper_fit = fit_tail(upper);
    report.lower_fit = fit_tail(lower);
    report.zero_fit = fit_tail(zero_forward);
    report.a_plus = -report.plus_fit.slope;
    report.log_A_plus = report.plus_fit.intercept;
    report.a_minus = -report.minus_fit.slope;
    report.log_A_minus = report.minus_fit.intercept;
    report.a_prime_upper = -report.upper_fit.slope;
    report.log_A_prime_upper = report.upper_fit.intercept;
    report.a_prime_lower = -report.lower_fit.slope;
    report.log_A_prime_lower = report.lower_fit.intercept;
    report.zero_growth = report.zero_fit.slope;

    for (int t = 0; t <= std::min(tb, tf); ++t) {
        const auto i = static_cast<std::size_t>(t);
        report.curve.push_back(RatePoint{t, plus_backward[i], minus_forward[i], zero_forward[i], upper[i], lower[i]});
    }
    return report;
}

}  // namespace repdyn
