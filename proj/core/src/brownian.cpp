#include "oa/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oa/stats.hpp"

namespace oa::detail {
extern const std::pair<double, double> kTwTable[81];
}

namespace oa {

BrownianPaths sample_bm(long k, long T, CounterRng& rng) {
    if (k < 0 || T < 1) throw std::invalid_argument("sample_bm: need k >= 0, T >= 1");
    BrownianPaths paths(k, T);
    const double step_sd = std::sqrt(1.0 / static_cast<double>(T));
    for (long c = 0; c <= k; ++c)
        for (long t = 1; t <= T; ++t)
            paths.at(c, t) = paths.at(c, t - 1) + step_sd * rng.normal();
    return paths;
}

long default_grid(long k, long factor) {
    const double lg = std::log(static_cast<double>(k + 2));
    const long T = factor * std::max<long>(k, 1) *
                   static_cast<long>(std::ceil(lg * lg));
    return std::max<long>(T, 64);
}

void LkAccumulator::add_component(std::span<const double> path) {
    if (static_cast<long>(path.size()) != T_ + 1)
        throw std::invalid_argument("LkAccumulator: path size must be T+1");
    if (count_ == 0) {
        best_.assign(path.begin(), path.end());  // D[1][t] = W^1(t)
    } else {
        // D[i][t] = W^i(t) + max_{s<=t} (D[i-1][s] - W^i(s))
        double run = best_[0] - path[0];
        for (long t = 0; t <= T_; ++t) {
            run = std::max(run, best_[static_cast<std::size_t>(t)] -
                                    path[static_cast<std::size_t>(t)]);
            best_[static_cast<std::size_t>(t)] = path[static_cast<std::size_t>(t)] + run;
        }
    }
    ++count_;
}

double LkAccumulator::value() const {
    if (count_ == 0) throw std::logic_error("LkAccumulator: no components added");
    return best_.back();
}

double lk_functional(const BrownianPaths& paths) {
    LkAccumulator acc(paths.grid());
    std::vector<double> buf(static_cast<std::size_t>(paths.grid() + 1));
    for (long c = 0; c <= paths.k(); ++c) {
        for (long t = 0; t <= paths.grid(); ++t)
            buf[static_cast<std::size_t>(t)] = paths.at(c, t);
        acc.add_component(buf);
    }
    return acc.value();
}

double tw_rescale(double value, long k) {
    if (k < 1) throw std::invalid_argument("tw_rescale: requires k >= 1");
    const double kd = static_cast<double>(k);
    return std::pow(kd, 1.0 / 6.0) * (value - 2.0 * std::sqrt(kd));
}

double theorem1_statistic(double score, long n, long k, double mean_step) {
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    return std::pow(kd, 1.0 / 6.0) *
           (score - nd * mean_step - 2.0 * std::sqrt(nd * kd)) / std::sqrt(nd);
}

// --- TW reference ---------------------------------------------------------

namespace {
constexpr int kTableSize = 81;
}

TwReference::TwReference() {
    // Fritsch-Carlson monotone cubic slopes.
    const auto* tab = detail::kTwTable;
    std::vector<double> delta(kTableSize - 1);
    for (int i = 0; i < kTableSize - 1; ++i)
        delta[static_cast<std::size_t>(i)] =
            (tab[i + 1].second - tab[i].second) / (tab[i + 1].first - tab[i].first);
    slopes_.resize(kTableSize);
    slopes_[0] = delta[0];
    slopes_[kTableSize - 1] = delta[kTableSize - 2];
    for (int i = 1; i < kTableSize - 1; ++i) {
        const double d0 = delta[static_cast<std::size_t>(i - 1)];
        const double d1 = delta[static_cast<std::size_t>(i)];
        slopes_[static_cast<std::size_t>(i)] =
            (d0 * d1 <= 0.0) ? 0.0 : 2.0 * d0 * d1 / (d0 + d1);  // harmonic mean
    }
}

const TwReference& TwReference::instance() {
    static const TwReference ref;
    return ref;
}

std::span<const std::pair<double, double>> TwReference::table() const {
    return {detail::kTwTable, kTableSize};
}

double TwReference::cdf(double x) const {
    const auto* tab = detail::kTwTable;
    if (x <= tab[0].first) return tab[0].second;
    if (x >= tab[kTableSize - 1].first) return tab[kTableSize - 1].second;
    int lo = 0, hi = kTableSize - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (tab[mid].first <= x ? lo : hi) = mid;
    }
    const double h = tab[hi].first - tab[lo].first;
    const double t = (x - tab[lo].first) / h;
    const double y0 = tab[lo].second, y1 = tab[hi].second;
    const double m0 = slopes_[static_cast<std::size_t>(lo)] * h;
    const double m1 = slopes_[static_cast<std::size_t>(hi)] * h;
    const double t2 = t * t, t3 = t2 * t;
    const double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
                     (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
    return std::clamp(v, 0.0, 1.0);
}

double TwReference::quantile(double p) const {
    const auto* tab = detail::kTwTable;
    if (p <= tab[0].second) return tab[0].first;
    if (p >= tab[kTableSize - 1].second) return tab[kTableSize - 1].first;
    double lo = tab[0].first, hi = tab[kTableSize - 1].first;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double tw_cdf(double x) { return TwReference::instance().cdf(x); }

double tw_ks(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("tw_ks: empty sample");
    return ks_distance(sample, [](double x) { return tw_cdf(x); });
}

}  // namespace oa
