#pragma once

#include <Eigen/Dense>
#include <vector>

#include "oa/align.hpp"
#include "oa/rng.hpp"

namespace oa {

// The (k+1)-component correlated random walk R^i(j) with increments
// S(X_{j-i+1}, Y_j). X is indexed 1-k..n (doubly-infinite convention); the
// k letters below index 1 and the k letters above n-k are sampled iid like X
// and stored so results reproduce from the seed.
class WalkEnsemble {
  public:
    // x_full holds X_{1-k}, ..., X_n (size n + k); y holds Y_1..Y_n.
    WalkEnsemble(Seq x_full, Seq y, const PairScorer& scorer, long k);

    long k() const { return k_; }
    long n() const { return n_; }

    // X_idx for idx in [1-k, n].
    double x_at(long idx) const { return x_full_[static_cast<std::size_t>(idx - 1 + k_)]; }
    double y_at(long j) const { return y_[static_cast<std::size_t>(j - 1)]; }

    // increment of walk i (1-based) at step j: S(X_{j-i+1}, Y_j)
    double increment(long i, long j) const {
        return r_[static_cast<std::size_t>(j) * static_cast<std::size_t>(k_ + 1) +
                  static_cast<std::size_t>(i - 1)] -
               r_[static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(k_ + 1) +
                  static_cast<std::size_t>(i - 1)];
    }

    // R^i(j), prefix sum; R^i(0) = 0.
    double walk(long i, long j) const {
        return r_[static_cast<std::size_t>(j) * static_cast<std::size_t>(k_ + 1) +
                  static_cast<std::size_t>(i - 1)];
    }

    const Seq& x_full() const { return x_full_; }
    const Seq& y() const { return y_; }

  private:
    long k_, n_;
    Seq x_full_, y_;
    std::vector<double> r_;  // (n+1) x (k+1), time-major
};

WalkEnsemble build_walks(Seq x_full, Seq y, const PairScorer& scorer, long k);

// Samples Y per the model, X (+-1, P(+1)=pa) including both extensions, and
// builds the ensemble. normal_y selects iid standard normal Y letters.
WalkEnsemble sample_walks(long n, long k, const PairScorer& scorer, double pa, bool normal_y,
                          CounterRng& rng);

// Walk-increment telescoping score of a gap set (zero gap scores assumed).
double score_via_walks(const WalkEnsemble& walks, const GapAlignment& gaps);

// Increment-moment parameters of the walk ensemble.
struct CovParams {
    double var_diag = 0.0;  // VAR[S(X1,Y1)]
    double cov_off = 0.0;   // COV(S(X1,Y1), S(X0,Y1))
    double cov_v = 0.0;     // COV(S(X1,Y1), S(X1,Y2))
};

// Exact moments by finite enumeration over the binary alphabet; in the
// normal-Y product mode Gaussian moment identities apply.
CovParams theoretical_cov(const ScoringMatrix& s, double pa);
CovParams theoretical_cov_product(double pa, bool normal_y);

// Conditional covariance of the block increment sum given X = x in the
// normal-Y product mode: sum over the block of x-window outer products.
Eigen::MatrixXd empirical_increment_cov(const WalkEnsemble& walks, long block_start,
                                        long block_len);

double operator_norm(const Eigen::MatrixXd& sym);

struct CoupleResult {
    Eigen::MatrixXd coupled;       // same shape as the input samples (d x m)
    double deviation_bound = 0.0;  // max_i (sqrt(lambda_i) - sqrt(j))^2
};

// N = j^{1/2} Sigma^{-1/2} v, columnwise. Rejects non-PD Sigma
// (eigenvalue <= 1e-12 * j).
CoupleResult couple_to_isotropic(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& sigma,
                                 double j);

// Exact standard-normal upper tail P(N(0,1) >= s); requires s > 0.
double gaussian_tail(double s);

// Monte Carlo calibration of the covariance-concentration constant:
// quantile of |sum of x-window outer products - jI| / (k sqrt(j)) over draws.
double calibrate_cov_constant(long k, long j, int draws, double quantile, CounterRng& rng);

}  // namespace oa
