#pragma once

// Small statistical helpers for simulator and experiment checks.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace hawkes::testing {

// Two-sided Kolmogorov-Smirnov p-value against a given CDF, using the
// asymptotic Kolmogorov distribution with the Stephens small-sample
// correction.
template <typename Cdf>
double ks_test_pvalue(std::vector<double> samples, Cdf cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double x = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        p += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
    }
    return std::clamp(p, 0.0, 1.0);
}

// Pearson chi-square statistic for observed counts vs a uniform expectation.
inline double chi_square_uniform(const std::vector<long long>& counts, long long total) {
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0.0;
    for (long long c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

inline std::vector<double> ranks(const std::vector<double>& xs) {
    std::vector<int> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return xs[a] < xs[b]; });
    std::vector<double> r(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = mid;
        i = j + 1;
    }
    return r;
}

inline double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::vector<double> rx = ranks(xs);
    const std::vector<double> ry = ranks(ys);
    const double n = static_cast<double>(xs.size());
    const double mean = (n + 1.0) / 2.0;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    return num / std::sqrt(dx * dy);
}

inline double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace hawkes::testing
