#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace oa {

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n-1)
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// One-pass compensated moments; throws on an empty sample.
SummaryStats summarize(std::span<const double> sample);

// sup over sample points of |ECDF - reference|, both one-sided gaps.
double ks_distance(std::span<const double> sample,
                   const std::function<double(double)>& reference_cdf);

double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    int point_count = 0;
};

// Least-squares fit of log(stddev) on log(n); all inputs must be positive.
ExponentFit loglog_fit(std::span<const std::pair<double, double>> points);

}  // namespace oa
