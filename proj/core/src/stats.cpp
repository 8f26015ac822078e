#include "oa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oa {

namespace {
// Neumaier-compensated accumulation.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            c += (sum - t) + v;
        else
            c += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};
}  // namespace

SummaryStats summarize(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("summarize: empty sample");
    SummaryStats s;
    s.count = sample.size();
    Kahan acc;
    s.min = s.max = sample[0];
    for (double v : sample) {
        acc.add(v);
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = acc.value() / static_cast<double>(s.count);
    if (s.count > 1) {
        Kahan sq;
        for (double v : sample) {
            const double d = v - s.mean;
            sq.add(d * d);
        }
        s.variance = sq.value() / static_cast<double>(s.count - 1);
        if (s.variance < 0.0) s.variance = 0.0;
    }
    s.stddev = std::sqrt(s.variance);
    return s;
}

double ks_distance(std::span<const double> sample,
                   const std::function<double(double)>& reference_cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = reference_cdf(sorted[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    // merge sweep over the pooled order statistics
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return std::max(d, std::abs(1.0 - static_cast<double>(j) / nb));
}

ExponentFit loglog_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("loglog_fit: need >= 2 points");
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (const auto& [n, sd] : points) {
        if (n <= 0.0 || sd <= 0.0)
            throw std::invalid_argument("loglog_fit: values must be positive");
        lx.push_back(std::log(n));
        ly.push_back(std::log(sd));
    }
    const double m = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("loglog_fit: degenerate abscissae");
    ExponentFit fit;
    fit.point_count = static_cast<int>(points.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    fit.r2 = std::clamp(fit.r2, 0.0, 1.0);
    fit.slope_stderr =
        points.size() > 2 ? std::sqrt(ssr / (m - 2.0) / sxx) : 0.0;
    return fit;
}

}  // namespace oa
