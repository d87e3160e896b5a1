#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace polykin {

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Standard error of the mean of a correlated series via batch means.
inline double batch_means_stderr(const std::vector<double>& series, int n_batches = 16) {
    if (series.size() < static_cast<std::size_t>(2 * n_batches))
        n_batches = std::max<int>(2, static_cast<int>(series.size() / 2));
    const std::size_t batch = series.size() / n_batches;
    if (batch == 0) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> bm(n_batches, 0.0);
    for (int b = 0; b < n_batches; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < batch; ++i) s += series[b * batch + i];
        bm[b] = s / static_cast<double>(batch);
    }
    const double m = mean(bm);
    double var = 0.0;
    for (double x : bm) var += (x - m) * (x - m);
    var /= static_cast<double>(n_batches - 1);
    return std::sqrt(var / static_cast<double>(n_batches));
}

} // namespace polykin
