#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace snls {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    double slope_stderr = 0.0;
};

/// Ordinary least squares y = a x + b.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += e * e;
    }
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    if (n > 2 && sxx > 0.0) {
        fit.slope_stderr = std::sqrt(ss_res / ((n - 2) * sxx));
    }
    return fit;
}

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

/// Unbiased sample variance.
inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / (v.size() - 1);
}

inline double std_error_of_mean(const std::vector<double>& v) {
    return std::sqrt(variance(v) / v.size());
}

}  // namespace snls
