#pragma once
//
// Joint spectrum sampling: normalized Jordan projections (1/m) log λ(ρ(g))
// over spheres of radius m, their convex hulls, and zero-index analysis.
//

#include "repdyn/generators.hpp"
#include "repdyn/hull.hpp"
#include "repdyn/scan.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace repdyn {

// Default zero tolerance, relative to the max-norm of the queried vector.
inline constexpr double kZeroIndexRelTol = 1e-6;
// Samples with max-norm at or below this are rounding noise around the
// origin and count as the zero vector.
inline constexpr double kZeroSampleTol = 1e-12;

struct ZeroIndexInterval {
    std::vector<int> indices;  // 1-based
    bool is_consecutive = true;
    double tolerance = 0.0;
};

// indices = {i : |v_i| <= tol}; PreconditionError unless v is a Jordan vector.
ZeroIndexInterval zero_index_interval(const SpectralVector& v, double tol);

struct ConeSample {
    int m = 0;
    Word word;
    SpectralVector value;                       // (1/m) jordan_projection(rho(word))
    ZeroIndexInterval zeros;                    // at max(kZeroIndexRelTol * |value|_inf, kZeroSampleTol)
    std::vector<std::pair<int, int>> walls;     // 1-based (i, j), i < j, |v_i - v_j| <= tol
};

struct ConeHull {
    int m = 0;
    Polytope polytope;
};

struct ConeEstimate {
    int n = 0;
    int requested_m_max = 0;
    int m_max = 0;  // after truncation
    ScanPolicy policy;
    bool truncated = false;
    std::vector<ConeSample> samples;  // ordered by m, then scan order
    std::vector<ConeHull> hulls;      // one per m = 1..m_max
    // hausdorff[i] = d_H(hull at m = i + 2, hull at m = i + 1)
    std::vector<double> hausdorff;

    const Polytope& hull() const { return hulls.back().polytope; }
    std::optional<double> convergence() const {
        return hausdorff.empty() ? std::nullopt : std::optional<double>(hausdorff.back());
    }
};

// Sampled runs also include each sampled word's inverse, so the sample set
// is closed under g -> g^{-1}.
ConeEstimate sample_cone(const GeneratorSet& gens, int m_max, const ScanPolicy& policy,
                         int threads = default_thread_count());

struct ContainmentReport {
    int k = 0;
    int n = 0;
    double tol = 0.0;
    int window_low = 0;   // k + 1
    int window_high = 0;  // n - k; empty when low > high
    std::vector<std::size_t> violators;  // indices into cone.samples
    std::size_t nonzero_samples = 0;
    // min over nonzero samples of (b_k - b_{k+1}) / |b|_2
    std::optional<double> c_hat;
    bool pass = false;
};

// Zero indices are taken at tol * |b|_inf. Requires 1 <= k <= n/2; k = n/2
// leaves an empty target window and always fails.
ContainmentReport containment_check(const ConeEstimate& cone, int k, double tol = kZeroIndexRelTol);

inline constexpr double kInvolutionTol = 1e-8;

struct InvolutionReport {
    bool pass = false;
    std::size_t paired_by_word = 0;
    std::size_t paired_by_search = 0;
    std::vector<std::size_t> unmatched;  // indices into the sample list
};

InvolutionReport involution_symmetry_check(const std::vector<ConeSample>& samples);
InvolutionReport involution_symmetry_check(const ConeEstimate& cone);

}  // namespace repdyn
