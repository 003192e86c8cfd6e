#include "repdyn/fitting.hpp"

#include "repdyn/errors.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <limits>

namespace repdyn {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, double confidence) {
    if (x.size() != y.size()) throw PreconditionError("fit_line: size mismatch");
    if (x.size() < 2) throw PreconditionError("fit_line: need at least two points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw PreconditionError("fit_line: abscissae are all equal");
    LineFit fit;
    fit.points = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() < 3) {
        fit.slope_stderr = std::numeric_limits<double>::infinity();
        fit.slope_ci_low = -fit.slope_stderr;
        fit.slope_ci_high = fit.slope_stderr;
        return fit;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        sse += r * r;
    }
    fit.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    boost::math::students_t dist(n - 2.0);
    const double q = boost::math::quantile(dist, 0.5 + confidence / 2.0);
    fit.slope_ci_low = fit.slope - q * fit.slope_stderr;
    fit.slope_ci_high = fit.slope + q * fit.slope_stderr;
    return fit;
}

}  // namespace repdyn
