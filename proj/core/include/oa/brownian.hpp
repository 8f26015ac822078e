#pragma once

#include <span>
#include <utility>
#include <vector>

#include "oa/rng.hpp"

namespace oa {

// (k+1)-component Brownian motion discretized on a uniform grid of T steps
// over [0,1]; increments are iid N(0, 1/T) per step per component.
class BrownianPaths {
  public:
    BrownianPaths(long k, long T) : k_(k), T_(T) {
        values_.assign(static_cast<std::size_t>(k + 1) * static_cast<std::size_t>(T + 1), 0.0);
    }

    long k() const { return k_; }
    long grid() const { return T_; }

    double at(long comp, long t) const {
        return values_[static_cast<std::size_t>(comp) * static_cast<std::size_t>(T_ + 1) +
                       static_cast<std::size_t>(t)];
    }
    double& at(long comp, long t) {
        return values_[static_cast<std::size_t>(comp) * static_cast<std::size_t>(T_ + 1) +
                       static_cast<std::size_t>(t)];
    }

  private:
    long k_, T_;
    std::vector<double> values_;  // component-major
};

BrownianPaths sample_bm(long k, long T, CounterRng& rng);

// Default grid policy: 64 * k * ceil(log^2(k+2)) steps (at least 64).
long default_grid(long k, long factor = 64);

// Max over grid times 0 <= t_1 <= ... <= t_k <= 1 of the summed component
// increments; O(k T) dynamic program.
double lk_functional(const BrownianPaths& paths);

// Streaming variant for large k: component paths are supplied one at a time
// as cumulative values on the grid (size T+1). Avoids storing all paths.
class LkAccumulator {
  public:
    explicit LkAccumulator(long T) : T_(T) {}
    void add_component(std::span<const double> path);
    double value() const;  // valid after >= 1 component

  private:
    long T_;
    long count_ = 0;
    std::vector<double> best_;  // D[i][t] for the last added component
};

// k^{1/6} (value - 2 sqrt(k)); requires k >= 1.
double tw_rescale(double value, long k);

// k^{1/6} (score - n*meanStep - 2 sqrt(nk)) / sqrt(n).
double theorem1_statistic(double score, long n, long k, double mean_step);

// Bundled TW-GUE reference distribution: 81 tabulated CDF points on [-5,3]
// with monotone cubic (Fritsch-Carlson) interpolation.
class TwReference {
  public:
    static const TwReference& instance();

    double cdf(double x) const;
    double quantile(double p) const;  // monotone bisection on the interpolant
    double mean() const { return -1.771087; }
    double variance() const { return 0.813195; }
    std::span<const std::pair<double, double>> table() const;

  private:
    TwReference();
    std::vector<double> slopes_;  // interpolant derivatives at the nodes
};

double tw_cdf(double x);
// Kolmogorov-Smirnov distance between the sample ECDF and the TW reference.
double tw_ks(std::span<const double> sample);

}  // namespace oa
