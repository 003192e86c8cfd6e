#include "repdyn/domination.hpp"

#include "repdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace repdyn {

// --- parabolic index sets ----------------------------------------------------

ParabolicIndexSet::ParabolicIndexSet(std::vector<int> theta, int n) : theta_(std::move(theta)), n_(n) {
    if (n_ < 2) throw PreconditionError("dimension must be at least 2");
    std::sort(theta_.begin(), theta_.end());
    theta_.erase(std::unique(theta_.begin(), theta_.end()), theta_.end());
    for (int i : theta_)
        if (i < 1 || i > n_ - 1) throw PreconditionError("index " + std::to_string(i) + " outside {1, ..., n-1}");
    std::vector<int> opposite;
    for (int i : theta_) opposite.push_back(n_ - i);
    std::sort(opposite.begin(), opposite.end());
    self_opposite_ = opposite == theta_;
}

ParabolicIndexSet theta_star(const ParabolicIndexSet& theta, int n) {
    if (theta.n() != n) throw PreconditionError("index set belongs to a different dimension");
    std::vector<int> out;
    for (int i : theta.indices()) out.push_back(n - i);
    return ParabolicIndexSet(std::move(out), n);
}

std::vector<int> block_structure(const ParabolicIndexSet& theta, int n) {
    if (theta.n() != n) throw PreconditionError("index set belongs to a different dimension");
    std::vector<int> sizes;
    int previous = 0;
    for (int i : theta.indices()) {
        sizes.push_back(i - previous);
        previous = i;
    }
    sizes.push_back(n - previous);
    return sizes;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::dominated: return "dominated";
        case Verdict::partially_hyperbolic: return "partially-hyperbolic";
        case Verdict::inconclusive: return "inconclusive";
        case Verdict::refuted: return "refuted";
    }
    return "inconclusive";
}

// --- domination scan ---------------------------------------------------------

namespace {

struct SphereAccumulator {
    std::uint64_t words = 0;
    double gap_min = std::numeric_limits<double>::infinity();
    double gap_sum = 0.0;
    double log_ak_min = std::numeric_limits<double>::infinity();
    double log_ank1_max = -std::numeric_limits<double>::infinity();
    std::vector<Letter> argmin;
    std::uint64_t ill_conditioned = 0;

    void merge(const SphereAccumulator& o) {
        words += o.words;
        gap_sum += o.gap_sum;
        if (o.gap_min < gap_min) {
            gap_min = o.gap_min;
            argmin = o.argmin;
        }
        log_ak_min = std::min(log_ak_min, o.log_ak_min);
        log_ank1_max = std::max(log_ank1_max, o.log_ank1_max);
        ill_conditioned += o.ill_conditioned;
    }
};

using Accumulator = std::vector<SphereAccumulator>;

}  // namespace

DominationReport domination_scan(const GeneratorSet& gens, int k, int max_length, const ScanPolicy& policy,
                                 int threads) {
    const int n = gens.dim();
    if (k < 1 || 2 * k > n) throw PreconditionError("domination index must satisfy 1 <= k <= n/2");
    if (max_length < 3) throw PreconditionError("domination scan needs L_max >= 3");

    auto visit = [&](Accumulator& acc, const ScanVisit& v) {
        if (acc.empty()) acc.resize(static_cast<std::size_t>(max_length) + 1);
        const auto spec = cartan_projection(Matrix::trusted(v.value), Matrix::trusted(v.inverse));
        const double gap = std::min(spec[k - 1] - spec[k], spec[n - k - 1] - spec[n - k]);
        auto& s = acc[v.letters.size()];
        ++s.words;
        s.gap_sum += gap;
        if (gap < s.gap_min) {
            s.gap_min = gap;
            s.argmin.assign(v.letters.begin(), v.letters.end());
        }
        s.log_ak_min = std::min(s.log_ak_min, spec[k - 1]);
        s.log_ank1_max = std::max(s.log_ank1_max, spec[n - k]);
        if (is_ill_conditioned(spec)) ++s.ill_conditioned;
    };
    const auto scan = scan_words<Accumulator>(gens, 1, max_length, policy, threads, visit);

    Accumulator merged(static_cast<std::size_t>(max_length) + 1);
    for (const auto& part : scan.partitions)
        for (std::size_t l = 0; l < part.size(); ++l) merged[l].merge(part[l]);

    DominationReport report;
    report.k = k;
    report.n = n;
    report.max_length = max_length;
    report.policy = policy;
    report.truncated = scan.truncated;
    report.partial_hyperbolicity_applicable = 2 * k < n;
    for (int l = 1; l <= scan.complete_length; ++l) {
        const auto& s = merged[static_cast<std::size_t>(l)];
        if (s.words == 0) continue;
        SphereStats stats;
        stats.length = l;
        stats.words = s.words;
        stats.gap_min = s.gap_min;
        stats.gap_mean = s.gap_sum / static_cast<double>(s.words);
        stats.log_ak_min = s.log_ak_min;
        stats.log_ank1_max = s.log_ank1_max;
        stats.gap_argmin = Word(gens.rank(), s.argmin);
        report.ill_conditioned_words += s.ill_conditioned;
        report.spheres.push_back(std::move(stats));
    }

    for (const auto& s : report.spheres) {
        if (s.gap_min <= kGapZeroTol) {
            report.first_violation_length = s.length;
            report.violating_word = s.gap_argmin;
            break;
        }
    }

    std::vector<double> xs, gaps, tops, bottoms;
    for (const auto& s : report.spheres) {
        if (s.length < 2) continue;
        xs.push_back(s.length);
        gaps.push_back(s.gap_min);
        tops.push_back(s.log_ak_min);
        bottoms.push_back(s.log_ank1_max);
    }
    if (xs.size() >= 2) {
        report.gap_fit = fit_line(xs, gaps);
        report.top_fit = fit_line(xs, tops);
        report.bottom_fit = fit_line(xs, bottoms);
    }

    if (report.violating_word) {
        report.verdict = Verdict::refuted;
    } else if (!policy.is_exhaustive() || !report.gap_fit || report.gap_fit->slope <= 0.0) {
        report.verdict = Verdict::inconclusive;
    } else {
        report.verdict = Verdict::dominated;
        if (report.partial_hyperbolicity_applicable) {
            bool bounds = true;
            for (const auto& s : report.spheres)
                if (s.length >= 2 && (s.log_ak_min <= 0.0 || s.log_ank1_max >= 0.0)) bounds = false;
            if (bounds && report.top_fit->slope > 0.0 && report.bottom_fit->slope < 0.0)
                report.verdict = Verdict::partially_hyperbolic;
        }
    }
    return report;
}

// --- flags -------------------------------------------------------------------

FlagEstimate flag_estimate(const GeneratorSet& gens, const BoundaryPoint& point, int k, int depth) {
    const int n = gens.dim();
    if (k < 1 || k >= n) throw PreconditionError("flag index must satisfy 1 <= k < n");
    if (depth < 1) throw PreconditionError("flag depth must be positive");
    if (point.rank() != gens.rank()) throw PreconditionError("boundary point alphabet does not match generators");

    Mat value = Mat::Identity(n, n);
    Mat inverse = Mat::Identity(n, n);
    std::optional<Subspace> zeta, theta;
    std::vector<double> residuals(static_cast<std::size_t>(depth), 0.0);
    for (int d = 1; d <= depth; ++d) {
        const Letter x = point.at(static_cast<std::size_t>(d - 1));
        value = value * gens.image(x).data();
        inverse = gens.image(x.inverse()).data() * inverse;
        if (!value.allFinite() || !inverse.allFinite())
            throw NumericError("flag estimate overflowed at depth " + std::to_string(d), static_cast<std::size_t>(d));
        const Matrix m = Matrix::trusted(value);
        const Matrix m_inv = Matrix::trusted(inverse);
        Subspace z = top_singular_subspace(m, m_inv, k);
        // theta(x) = S_{n-k}(rho(x_d)^{-1}) = U_{n-k}(rho(x_d))
        Subspace t = bottom_singular_subspace(m_inv, m, n - k);
        if (zeta) {
            residuals[static_cast<std::size_t>(d - 1)] =
                std::max(subspace_distance(*zeta, z), subspace_distance(*theta, t));
        }
        zeta = std::move(z);
        theta = std::move(t);
    }
    const double residual = depth >= 2 ? residuals.back() : 0.0;
    return FlagEstimate{point, k, depth, std::move(*zeta), std::move(*theta), residual, std::move(residuals)};
}

FlagEstimate flag_estimate(const GeneratorSet& gens, const Word& boundary_prefix, int k, int depth) {
    return flag_estimate(gens, BoundaryPoint::periodic(boundary_prefix), k, depth);
}

double transversality_check(const FlagEstimate& e1, const FlagEstimate& e2) {
    if (e1.point == e2.point) throw PreconditionError("transversality needs distinct boundary points");
    if (e1.k != e2.k) throw PreconditionError("flag estimates use different indices");
    return principal_angle(e1.zeta, e2.theta);
}

}  // namespace repdyn
