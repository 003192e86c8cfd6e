#pragma once

#include <vector>

namespace repdyn {

// Ordinary least squares y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    // Two-sided Student-t interval for the slope; infinite with < 3 points.
    double slope_ci_low = 0.0;
    double slope_ci_high = 0.0;
    std::size_t points = 0;

    bool slope_ci_contains_zero() const { return slope_ci_low <= 0.0 && slope_ci_high >= 0.0; }
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, double confidence = 0.95);

}  // namespace repdyn
