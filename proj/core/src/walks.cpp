#include "oa/walks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oa {

WalkEnsemble::WalkEnsemble(Seq x_full, Seq y, const PairScorer& scorer, long k)
    : k_(k), n_(static_cast<long>(y.size())), x_full_(std::move(x_full)), y_(std::move(y)) {
    if (k_ < 0 || k_ > n_) throw std::invalid_argument("WalkEnsemble: need 0 <= k <= n");
    if (static_cast<long>(x_full_.size()) != n_ + k_)
        throw std::invalid_argument("WalkEnsemble: X must cover indices 1-k..n (size n+k)");
    const std::size_t width = static_cast<std::size_t>(k_ + 1);
    r_.assign(static_cast<std::size_t>(n_ + 1) * width, 0.0);
    for (long j = 1; j <= n_; ++j) {
        const double yj = y_at(j);
        for (long i = 1; i <= k_ + 1; ++i) {
            const double step = scorer.pair(x_at(j - i + 1), yj);
            r_[static_cast<std::size_t>(j) * width + static_cast<std::size_t>(i - 1)] =
                r_[static_cast<std::size_t>(j - 1) * width + static_cast<std::size_t>(i - 1)] +
                step;
        }
    }
}

WalkEnsemble build_walks(Seq x_full, Seq y, const PairScorer& scorer, long k) {
    return WalkEnsemble(std::move(x_full), std::move(y), scorer, k);
}

WalkEnsemble sample_walks(long n, long k, const PairScorer& scorer, double pa, bool normal_y,
                          CounterRng& rng) {
    Seq x_full(static_cast<std::size_t>(n + k));
    for (auto& v : x_full) v = rng.pm1(pa);
    Seq y(static_cast<std::size_t>(n));
    for (auto& v : y) v = normal_y ? rng.normal() : rng.pm1(pa);
    return WalkEnsemble(std::move(x_full), std::move(y), scorer, k);
}

double score_via_walks(const WalkEnsemble& walks, const GapAlignment& gaps) {
    const long k = walks.k();
    if (static_cast<long>(gaps.positions.size()) != k)
        throw std::invalid_argument("score_via_walks: gap count does not match ensemble k");
    double score = 0.0;
    long prev = 0;  // c_{i-1}, with c_0 = 0
    for (long i = 1; i <= k; ++i) {
        const long c = gaps.positions[static_cast<std::size_t>(i - 1)];
        score += walks.walk(i, c - 1) - walks.walk(i, prev);
        prev = c;
    }
    score += walks.walk(k + 1, walks.n()) - walks.walk(k + 1, prev);
    return score;
}

namespace {
// Expectation over one +-1 letter with P(+1) = pa.
template <typename F>
double e1(double pa, F f) {
    return pa * f(1.0) + (1.0 - pa) * f(-1.0);
}
}  // namespace

CovParams theoretical_cov(const ScoringMatrix& s, double pa) {
    const double mean = e1(pa, [&](double x) {
        return e1(pa, [&](double y) { return s.letter_pair(x, y); });
    });
    CovParams p;
    p.var_diag = e1(pa, [&](double x) {
                     return e1(pa, [&](double y) {
                         const double v = s.letter_pair(x, y);
                         return v * v;
                     });
                 }) - mean * mean;
    // enumerate (x1, x0, y1)
    p.cov_off = e1(pa, [&](double x1) {
                    return e1(pa, [&](double x0) {
                        return e1(pa, [&](double y1) {
                            return s.letter_pair(x1, y1) * s.letter_pair(x0, y1);
                        });
                    });
                }) - mean * mean;
    // enumerate (x1, y1, y2)
    p.cov_v = e1(pa, [&](double x1) {
                  return e1(pa, [&](double y1) {
                      return e1(pa, [&](double y2) {
                          return s.letter_pair(x1, y1) * s.letter_pair(x1, y2);
                      });
                  });
              }) - mean * mean;
    return p;
}

CovParams theoretical_cov_product(double pa, bool normal_y) {
    const double mx = 2.0 * pa - 1.0;
    const double my = normal_y ? 0.0 : 2.0 * pa - 1.0;
    const double mean = mx * my;
    CovParams p;
    p.var_diag = 1.0 - mean * mean;          // E[X^2 Y^2] = 1 in both modes
    p.cov_off = mx * mx - mean * mean;       // E[X1 X0 Y1^2] = mx^2 E[Y^2]
    p.cov_v = my * my - mean * mean;         // E[X1^2 Y1 Y2] = my^2
    return p;
}

Eigen::MatrixXd empirical_increment_cov(const WalkEnsemble& walks, long block_start,
                                        long block_len) {
    const long k = walks.k();
    if (block_start < 0 || block_len < 1 || block_start + block_len > walks.n())
        throw std::invalid_argument("empirical_increment_cov: block out of range");
    const long d = k + 1;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd w(d);
    for (long m = block_start + 1; m <= block_start + block_len; ++m) {
        for (long i = 0; i < d; ++i) w[i] = walks.x_at(m - i);
        cov.noalias() += w * w.transpose();
    }
    return cov;
}

double operator_norm(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

CoupleResult couple_to_isotropic(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& sigma,
                                 double j) {
    if (sigma.rows() != sigma.cols() || sigma.rows() != samples.rows())
        throw std::invalid_argument("couple_to_isotropic: dimension mismatch");
    if (!sigma.isApprox(sigma.transpose(), 1e-10))
        throw std::invalid_argument("couple_to_isotropic: Sigma not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    const Eigen::VectorXd lambda = eig.eigenvalues();
    if (lambda.minCoeff() <= 1e-12 * j)
        throw std::invalid_argument("couple_to_isotropic: Sigma not positive definite");
    const double sqrt_j = std::sqrt(j);
    Eigen::VectorXd inv_sqrt = lambda.array().sqrt().inverse();
    CoupleResult out;
    out.coupled = sqrt_j * (eig.eigenvectors() * inv_sqrt.asDiagonal() *
                            eig.eigenvectors().transpose() * samples);
    double bound = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const double d = std::sqrt(lambda[i]) - sqrt_j;
        bound = std::max(bound, d * d);
    }
    out.deviation_bound = bound;
    return out;
}

double gaussian_tail(double s) {
    if (s <= 0.0) throw std::invalid_argument("gaussian_tail: requires s > 0");
    return 0.5 * std::erfc(s / std::sqrt(2.0));
}

double calibrate_cov_constant(long k, long j, int draws, double quantile, CounterRng& rng) {
    if (k < 1 || j < 1 || draws < 1) throw std::invalid_argument("calibrate_cov_constant");
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(draws));
    const long d = k + 1;
    Eigen::MatrixXd cov(d, d);
    Eigen::VectorXd w(d);
    Seq x(static_cast<std::size_t>(j + k));
    const double denom = static_cast<double>(k) * std::sqrt(static_cast<double>(j));
    for (int t = 0; t < draws; ++t) {
        for (auto& v : x) v = rng.pm1(0.5);
        cov.setZero();
        for (long m = 1; m <= j; ++m) {
            for (long i = 0; i < d; ++i) w[i] = x[static_cast<std::size_t>(m - 1 + k - i)];
            cov.noalias() += w * w.transpose();
        }
        cov.diagonal().array() -= static_cast<double>(j);
        ratios.push_back(operator_norm(cov) / denom);
    }
    std::sort(ratios.begin(), ratios.end());
    const auto idx = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(ratios.size() - 1),
                         quantile * static_cast<double>(ratios.size())));
    return ratios[idx];
}

}  // namespace oa
