// Shared numerical utilities: log-space accumulation, binomial tables,
// splittable RNG seeding, small statistics helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace scramble {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Running log-sum-exp accumulator for sums of positive terms given as logs.
// Keeps a running maximum and a scaled mantissa so no intermediate overflows.
class LogSumAcc {
public:
    void add(double log_term) {
        if (log_term == kNegInf) return;
        if (log_term <= max_) {
            sum_ += std::exp(log_term - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }
    bool empty() const { return max_ == kNegInf; }
    // log of the accumulated sum; -inf if nothing was added.
    double log_value() const { return empty() ? kNegInf : max_ + std::log(sum_); }
    double value() const { return empty() ? 0.0 : std::exp(log_value()); }

private:
    double max_ = kNegInf;
    double sum_ = 0.0;
};

// log(x^p) honoring the convention x^0 = 1 even when x = 0 (empty product).
inline double log_pow(double x, long p) {
    if (p == 0) return 0.0;
    if (x <= 0.0) return kNegInf;
    return static_cast<double>(p) * std::log(x);
}

// Table of log-factorials; log_binom returns -inf outside the Pascal triangle,
// so out-of-range binomials drop out of log-space sums automatically.
class LogFactorialTable {
public:
    explicit LogFactorialTable(int n_max) : lf_(static_cast<size_t>(n_max) + 1, 0.0) {
        for (int n = 2; n <= n_max; ++n)
            lf_[static_cast<size_t>(n)] = lf_[static_cast<size_t>(n) - 1] + std::log(static_cast<double>(n));
    }
    double log_factorial(int n) const { return lf_.at(static_cast<size_t>(n)); }
    double log_binom(int n, int k) const {
        if (k < 0 || n < 0 || k > n) return kNegInf;
        return lf_[static_cast<size_t>(n)] - lf_[static_cast<size_t>(k)] - lf_[static_cast<size_t>(n - k)];
    }

private:
    std::vector<double> lf_;
};

// SplitMix64: used to derive independent per-realization seeds from
// (base seed, realization index) so ensemble members are reproducible
// regardless of scheduling or batching.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(uint64_t seed, uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y = a + b x.
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 points with matching sizes");
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

inline std::vector<double> rank_values(const std::vector<double>& v) {
    std::vector<size_t> order(v.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double mid = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;  // average rank for ties
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

// Spearman rank correlation (ties get average ranks).
inline double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    auto rx = rank_values(x), ry = rank_values(y);
    LinearFit f = linear_fit(rx, ry);
    double sign = f.slope >= 0 ? 1.0 : -1.0;
    return sign * std::sqrt(f.r_squared);
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean_of: empty");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double stddev_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double s = 0.0;
    for (double a : v) s += (a - m) * (a - m);
    return std::sqrt(s / static_cast<double>(v.size() > 1 ? v.size() - 1 : 1));
}

}  // namespace scramble
