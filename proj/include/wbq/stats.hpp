#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace wbq {

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Two-sided 95% Student-t quantile by degrees of freedom.
inline double t_quantile_95(int df) {
    static const double table[] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (df < 1) return table[0];
    if (df <= 30) return table[df - 1];
    return 1.960;
}

// Half-width of the 95% confidence interval of the mean across replications.
inline double ci_half_width_95(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    return t_quantile_95(static_cast<int>(n) - 1) * sample_sd(xs) /
           std::sqrt(static_cast<double>(n));
}

}  // namespace wbq
