#pragma once
//
// k-domination and singular-value partial hyperbolicity over word spheres,
// boundary flag estimates, and parabolic index-set bookkeeping.
//

#include "repdyn/fitting.hpp"
#include "repdyn/generators.hpp"
#include "repdyn/scan.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace repdyn {

// theta ⊆ {1, ..., n-1}: the simple roots log λ_i - log λ_{i+1}, i ∈ theta.
class ParabolicIndexSet {
public:
    ParabolicIndexSet(std::vector<int> theta, int n);

    const std::vector<int>& indices() const { return theta_; }
    int n() const { return n_; }
    // theta == theta*
    bool is_self_opposite() const { return self_opposite_; }

    friend bool operator==(const ParabolicIndexSet&, const ParabolicIndexSet&) = default;

private:
    std::vector<int> theta_;
    int n_;
    bool self_opposite_;
};

// {n - i : i ∈ theta}
ParabolicIndexSet theta_star(const ParabolicIndexSet& theta, int n);
// Diagonal block sizes of P_theta: (i_1, i_2 - i_1, ..., n - i_m).
std::vector<int> block_structure(const ParabolicIndexSet& theta, int n);

enum class Verdict { dominated, partially_hyperbolic, inconclusive, refuted };
std::string_view to_string(Verdict v);

// Gaps at or below this (in log scale) count as nonpositive.
inline constexpr double kGapZeroTol = 1e-9;

struct SphereStats {
    int length = 0;
    std::uint64_t words = 0;
    // gap(g) = min(log a_k - log a_{k+1}, log a_{n-k} - log a_{n-k+1})
    double gap_min = 0.0;
    double gap_mean = 0.0;
    double log_ak_min = 0.0;    // min of log a_k(rho(g))
    double log_ank1_max = 0.0;  // max of log a_{n-k+1}(rho(g))
    Word gap_argmin;
};

struct DominationReport {
    int k = 0;
    int n = 0;
    int max_length = 0;
    ScanPolicy policy;
    std::vector<SphereStats> spheres;  // L = 1 .. last complete sphere
    std::optional<LineFit> gap_fit;    // over L in [2, L_max]
    std::optional<LineFit> top_fit;    // log_ak_min vs L
    std::optional<LineFit> bottom_fit; // log_ank1_max vs L
    bool partial_hyperbolicity_applicable = false;  // k < n/2
    Verdict verdict = Verdict::inconclusive;
    bool truncated = false;
    std::optional<Word> violating_word;
    int first_violation_length = 0;  // 0 when no sphere has a nonpositive gap
    std::uint64_t ill_conditioned_words = 0;

    double fitted_rate() const { return gap_fit ? gap_fit->slope : 0.0; }
    double fitted_log_constant() const { return gap_fit ? gap_fit->intercept : 0.0; }
};

DominationReport domination_scan(const GeneratorSet& gens, int k, int max_length, const ScanPolicy& policy,
                                 int threads = default_thread_count());

struct FlagEstimate {
    BoundaryPoint point;
    int k = 0;
    int depth = 0;
    Subspace zeta;   // dim k
    Subspace theta;  // dim n - k
    double residual = 0.0;
    // residuals[d] = change between depth d and d+1 estimates, d >= 1; [0] unused
    std::vector<double> residuals;
};

FlagEstimate flag_estimate(const GeneratorSet& gens, const BoundaryPoint& point, int k, int depth);
// The prefix is extended periodically (it must be cyclically reduced).
FlagEstimate flag_estimate(const GeneratorSet& gens, const Word& boundary_prefix, int k, int depth);

// Smallest principal angle between e1.zeta and e2.theta; positive means
// zeta(x) ⊕ theta(y) = R^n at the sampled resolution.
double transversality_check(const FlagEstimate& e1, const FlagEstimate& e2);

}  // namespace repdyn
