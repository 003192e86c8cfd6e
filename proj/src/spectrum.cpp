#include "repdyn/spectrum.hpp"

#include "repdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace repdyn {

ZeroIndexInterval zero_index_interval(const SpectralVector& v, double tol) {
    if (v.kind() != SpectralKind::jordan) throw PreconditionError("zero-index interval needs a Jordan projection");
    ZeroIndexInterval out;
    out.tolerance = tol;
    for (int i = 0; i < v.dim(); ++i)
        if (std::abs(v[i]) <= tol) out.indices.push_back(i + 1);
    for (std::size_t i = 1; i < out.indices.size(); ++i)
        if (out.indices[i] != out.indices[i - 1] + 1) out.is_consecutive = false;
    return out;
}

namespace {

ConeSample make_sample(int m, Word word, const SpectralVector& jordan) {
    SpectralVector value(jordan.values() / static_cast<double>(m), SpectralKind::jordan);
    const double tol = std::max(kZeroIndexRelTol * value.values().lpNorm<Eigen::Infinity>(), kZeroSampleTol);
    ZeroIndexInterval zeros = zero_index_interval(value, tol);
    std::vector<std::pair<int, int>> walls;
    for (int i = 0; i < value.dim(); ++i)
        for (int j = i + 1; j < value.dim(); ++j)
            if (std::abs(value[i] - value[j]) <= tol) walls.emplace_back(i + 1, j + 1);
    return ConeSample{m, std::move(word), std::move(value), std::move(zeros), std::move(walls)};
}

}  // namespace

ConeEstimate sample_cone(const GeneratorSet& gens, int m_max, const ScanPolicy& policy, int threads) {
    if (m_max < 2) throw PreconditionError("cone sampling needs m_max >= 2");
    const int rank = gens.rank();

    using Acc = std::vector<ConeSample>;
    auto visit = [&](Acc& acc, const ScanVisit& v) {
        const int m = static_cast<int>(v.letters.size());
        const Matrix value = Matrix::trusted(v.value);
        const Matrix inverse = Matrix::trusted(v.inverse);
        Word w(rank, std::vector<Letter>(v.letters.begin(), v.letters.end()));
        if (v.sampled) acc.push_back(make_sample(m, w.inverse(), jordan_projection(inverse, value)));
        acc.push_back(make_sample(m, std::move(w), jordan_projection(value, inverse)));
    };
    auto scan = scan_words<Acc>(gens, 1, m_max, policy, threads, visit);

    ConeEstimate cone;
    cone.n = gens.dim();
    cone.requested_m_max = m_max;
    cone.policy = policy;
    cone.truncated = scan.truncated;
    cone.m_max = scan.complete_length;
    for (auto& part : scan.partitions)
        for (auto& s : part)
            if (s.m <= cone.m_max) cone.samples.push_back(std::move(s));
    std::stable_sort(cone.samples.begin(), cone.samples.end(),
                     [](const ConeSample& a, const ConeSample& b) { return a.m < b.m; });

    for (int m = 1; m <= cone.m_max; ++m) {
        std::vector<Vec> points;
        for (const auto& s : cone.samples)
            if (s.m == m) points.push_back(s.value.values());
        cone.hulls.push_back(ConeHull{m, convex_hull(points)});
    }
    for (std::size_t i = 1; i < cone.hulls.size(); ++i)
        cone.hausdorff.push_back(hausdorff_distance(cone.hulls[i].polytope, cone.hulls[i - 1].polytope));
    return cone;
}

ContainmentReport containment_check(const ConeEstimate& cone, int k, double tol) {
    if (cone.samples.empty()) throw PreconditionError("containment check on an empty cone");
    const int n = cone.n;
    if (k < 1 || 2 * k > n) throw PreconditionError("containment index must satisfy 1 <= k <= n/2");
    ContainmentReport report;
    report.k = k;
    report.n = n;
    report.tol = tol;
    report.window_low = k + 1;
    report.window_high = n - k;

    for (std::size_t i = 0; i < cone.samples.size(); ++i) {
        const SpectralVector& b = cone.samples[i].value;
        const double scale = b.values().lpNorm<Eigen::Infinity>();
        if (scale <= kZeroSampleTol) continue;
        ++report.nonzero_samples;
        const auto zeros = zero_index_interval(b, std::max(tol * scale, kZeroSampleTol));
        for (int idx : zeros.indices) {
            if (idx < report.window_low || idx > report.window_high) {
                report.violators.push_back(i);
                break;
            }
        }
        const double gap = (b[k - 1] - b[k]) / b.values().norm();
        report.c_hat = report.c_hat ? std::min(*report.c_hat, gap) : gap;
    }
    report.pass = report.window_low <= report.window_high && report.violators.empty() &&
                  (!report.c_hat || *report.c_hat > 0.0);
    return report;
}

InvolutionReport involution_symmetry_check(const std::vector<ConeSample>& samples) {
    InvolutionReport report;
    std::map<std::pair<int, std::vector<Letter>>, std::vector<std::size_t>> by_word;
    for (std::size_t i = 0; i < samples.size(); ++i)
        by_word[{samples[i].m, samples[i].word.letters()}].push_back(i);

    auto close = [](const SpectralVector& a, const SpectralVector& b) {
        return a.dim() == b.dim() && (a.values() - b.values()).lpNorm<Eigen::Infinity>() <= kInvolutionTol;
    };
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const SpectralVector target = opposition_involution(samples[i].value);
        bool matched = false;
        const auto it = by_word.find({samples[i].m, samples[i].word.inverse().letters()});
        if (it != by_word.end()) {
            for (std::size_t j : it->second) {
                if (close(samples[j].value, target)) {
                    matched = true;
                    ++report.paired_by_word;
                    break;
                }
            }
        }
        if (!matched) {
            for (const auto& s : samples) {
                if (s.m == samples[i].m && close(s.value, target)) {
                    matched = true;
                    ++report.paired_by_search;
                    break;
                }
            }
        }
        if (!matched) report.unmatched.push_back(i);
    }
    report.pass = report.unmatched.empty();
    return report;
}

InvolutionReport involution_symmetry_check(const ConeEstimate& cone) {
    return involution_symmetry_check(cone.samples);
}

}  // namespace repdyn
