#pragma once
//
// The linear flow of rho along a single flow line of F_r, trivialized over
// the line: fiber at time t is R^n and the flow from 0 to t acts by P(t).
//
// Ordering: P(0) = I and P(t+1) = rho(x_t) P(t), so for t > 0
//   P(t) = rho(x_{t-1}) ... rho(x_1) rho(x_0),
// and for t < 0, P(t) = rho(x_t)^{-1} ... rho(x_{-1})^{-1}.
//

#include "repdyn/fitting.hpp"
#include "repdyn/generators.hpp"

#include <optional>
#include <vector>

namespace repdyn {

inline constexpr int kDefaultWindow = 48;
// Minimum angle between one splitting subspace and the sum of the others.
inline constexpr double kIndependenceTol = 1e-6;

class CocycleTrajectory {
public:
    // Products are cut at the first non-finite entry (truncated() then
    // reports true and past()/future() shrink accordingly).
    CocycleTrajectory(const GeneratorSet& gens, FlowLineWindow line);

    const FlowLineWindow& line() const { return line_; }
    const GeneratorSet& generators() const { return gens_; }
    int dim() const { return gens_.dim(); }
    int past() const { return static_cast<int>(backward_.size()) - 1;  }
    int future() const { return static_cast<int>(forward_.size()) - 1; }
    bool truncated() const { return truncated_; }

    // P(t) and P(t)^{-1} for t in [-past, future].
    const Mat& product(int t) const;
    const Mat& product_inverse(int t) const;
    // rho(x_t), t in [-past, future - 1]
    const Matrix& step(int t) const;

private:
    GeneratorSet gens_;
    FlowLineWindow line_;
    std::vector<Mat> forward_, forward_inv_;    // t = 0, 1, ..., future
    std::vector<Mat> backward_, backward_inv_;  // t = 0, -1, ..., -past
    bool truncated_ = false;
};

CocycleTrajectory build_trajectory(const GeneratorSet& gens, const FlowLineWindow& line);

struct SplittingEstimate {
    int k = 0;
    int n = 0;
    Subspace v_plus;   // dim k, expanded by the forward flow
    Subspace v_zero;   // dim n - 2k
    Subspace v_minus;  // dim k, contracted by the forward flow
    // Attracting (n-k)-subspaces whose intersection gives v_zero.
    Subspace z_prime;  // v_plus + v_zero
    Subspace theta;    // v_zero + v_minus
    double residual = 0.0;           // change between 3/4 of the window and the full window
    double intersection_residual = 0.0;
    double independence_angle = 0.0;
};

// V+ = U_k(P(-T)^{-1}), V- = S_k(P(T)), V0 = U_{n-k}(P(-T)^{-1}) ∩ S_{n-k}(P(T)).
// Requires 1 <= k < n/2; DegenerateGapError names the first time t at
// which the k or n-k gap of P(t) or P(-t)^{-1} degenerates.
SplittingEstimate estimate_splitting(const CocycleTrajectory& traj, int k);

struct RatePoint {
    int t = 0;
    double plus_backward = 0.0;  // log |P(-t) restricted to V+|
    double minus_forward = 0.0;  // log |P(t) restricted to V-|
    double zero_forward = 0.0;   // log |P(t) restricted to V0|
    double upper_ratio = 0.0;    // log(|P(t)|V0| / m(P(t)|V+))
    double lower_ratio = 0.0;    // log(|P(t)|V-| / m(P(t)|V0))
};

struct RateReport {
    // Slopes are fitted over the last two thirds of the window; each
    // exponent is minus the fitted slope, each log constant its intercept.
    double a_plus = 0.0, log_A_plus = 0.0;
    double a_minus = 0.0, log_A_minus = 0.0;
    double a_prime_upper = 0.0, log_A_prime_upper = 0.0;  // v in V+, w in V0
    double a_prime_lower = 0.0, log_A_prime_lower = 0.0;  // v in V0, w in V-
    double zero_growth = 0.0;  // fitted slope of log |P(t)|V0|
    LineFit plus_fit, minus_fit, upper_fit, lower_fit, zero_fit;
    std::vector<RatePoint> curve;  // t = 0 .. min(past, future)
};

// Fiber norm |v|_h = |h v|; the identity by default.
RateReport measure_rates(const CocycleTrajectory& traj, const SplittingEstimate& split,
                         const std::optional<Matrix>& fiber_norm = std::nullopt);

}  // namespace repdyn
