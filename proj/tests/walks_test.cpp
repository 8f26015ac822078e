#include <doctest.h>

#include <cmath>
#include <vector>

#include "oa/rng.hpp"
#include "oa/stats.hpp"
#include "oa/walks.hpp"

using namespace oa;

namespace {

Seq random_pm1(long len, CounterRng& rng, double pa = 0.5) {
    Seq s(static_cast<std::size_t>(len));
    for (auto& v : s) v = rng.pm1(pa);
    return s;
}

}  // namespace

TEST_CASE("k=0 gives a single walk with diagonal steps") {
    CounterRng rng(71);
    const long n = 15;
    const Seq x = random_pm1(n, rng);
    const Seq y = random_pm1(n, rng);
    const WalkEnsemble walks = build_walks(x, y, PairScorer::product(), 0);
    double sum = 0.0;
    for (long j = 1; j <= n; ++j) {
        sum += x[static_cast<std::size_t>(j - 1)] * y[static_cast<std::size_t>(j - 1)];
        CHECK(walks.walk(1, j) == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("second walk at step three uses the shifted x letters") {
    CounterRng rng(73);
    const long n = 8, k = 2;
    const Seq x_full = random_pm1(n + k, rng);
    const Seq y = random_pm1(n, rng);
    const WalkEnsemble walks = build_walks(x_full, y, PairScorer::product(), k);
    const double expect = walks.x_at(0) * walks.y_at(1) + walks.x_at(1) * walks.y_at(2) +
                          walks.x_at(2) * walks.y_at(3);
    CHECK(walks.walk(2, 3) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("walk values equal recomputed increment sums on 100 instances") {
    CounterRng rng(79);
    for (int t = 0; t < 100; ++t) {
        const long n = 3 + static_cast<long>(rng.uniform() * 10);
        const long k = static_cast<long>(rng.uniform() * 4);
        const Seq x_full = random_pm1(n + k, rng);
        const Seq y = random_pm1(n, rng);
        const WalkEnsemble walks = build_walks(x_full, y, PairScorer::product(), k);
        for (long i = 1; i <= k + 1; ++i) {
            double sum = 0.0;
            for (long j = 1; j <= n; ++j) {
                sum += walks.x_at(j - i + 1) * walks.y_at(j);
                CHECK(walks.walk(i, j) == doctest::Approx(sum).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("build_walks rejects a missing x extension") {
    CounterRng rng(83);
    const Seq y = random_pm1(6, rng);
    const Seq x_short = random_pm1(6, rng);  // needs 6 + 2 letters for k=2
    CHECK_THROWS(build_walks(x_short, y, PairScorer::product(), 2));
}

TEST_CASE("theoretical moments in the product modes") {
    const CovParams pn = theoretical_cov_product(0.5, true);
    CHECK(pn.cov_v == 0.0);  // independent x letters, centered normal y
    const CovParams pb = theoretical_cov_product(0.5, false);
    CHECK(pb.var_diag == 1.0);
}

TEST_CASE("theoretical moments match enumeration for matrix scoring") {
    const ScoringMatrix lcs{1, 0, 1, 0, 0};
    const double pa = 0.3;
    const CovParams got = theoretical_cov(lcs, pa);
    // independent 3-letter enumeration done from scratch
    double mean = 0.0, e11 = 0.0, e_off = 0.0, e_v = 0.0;
    const double probs[2] = {pa, 1.0 - pa};
    const double codes[2] = {1.0, -1.0};
    for (int x1 = 0; x1 < 2; ++x1)
        for (int y1 = 0; y1 < 2; ++y1) {
            const double p = probs[x1] * probs[y1];
            const double s = lcs.letter_pair(codes[x1], codes[y1]);
            mean += p * s;
            e11 += p * s * s;
            for (int z = 0; z < 2; ++z) {
                // z is X0 for the shared-y moment, Y2 for the shared-x moment
                e_off += p * probs[z] * s * lcs.letter_pair(codes[z], codes[y1]);
                e_v += p * probs[z] * s * lcs.letter_pair(codes[x1], codes[z]);
            }
        }
    CHECK(got.var_diag == doctest::Approx(e11 - mean * mean).epsilon(1e-12));
    CHECK(got.cov_off == doctest::Approx(e_off - mean * mean).epsilon(1e-12));
    CHECK(got.cov_v == doctest::Approx(e_v - mean * mean).epsilon(1e-12));
}

TEST_CASE("end-to-end walk covariance law for one gap") {
    // cov(R^1(n), R^2(n)) = n*cov_off + (n-1)*cov_v for matrix scoring
    const ScoringMatrix lcs{1, 0, 1, 0, 0};
    const double pa = 0.3;
    const CovParams cp = theoretical_cov(lcs, pa);
    const long n = 200, trials = 10000;
    CounterRng rng(89);
    std::vector<double> r1(trials), r2(trials);
    for (long t = 0; t < trials; ++t) {
        const Seq x_full = random_pm1(n + 1, rng, pa);
        const Seq y = random_pm1(n, rng, pa);
        const WalkEnsemble w = build_walks(x_full, y, PairScorer::matrix(lcs), 1);
        r1[static_cast<std::size_t>(t)] = w.walk(1, n);
        r2[static_cast<std::size_t>(t)] = w.walk(2, n);
    }
    const SummaryStats s1 = summarize(r1), s2 = summarize(r2);
    double cov = 0.0;
    std::vector<double> prods(trials);
    for (long t = 0; t < trials; ++t) {
        prods[static_cast<std::size_t>(t)] = (r1[static_cast<std::size_t>(t)] - s1.mean) *
                                             (r2[static_cast<std::size_t>(t)] - s2.mean);
        cov += prods[static_cast<std::size_t>(t)];
    }
    cov /= static_cast<double>(trials - 1);
    const double se = summarize(prods).stddev / std::sqrt(static_cast<double>(trials));
    const double expect = static_cast<double>(n) * cp.cov_off +
                          static_cast<double>(n - 1) * cp.cov_v;
    CHECK(std::abs(cov - expect) <= 5.0 * se);
}

TEST_CASE("block covariance trivial cases") {
    CounterRng rng(97);
    const long n = 40;
    const Seq x = random_pm1(n, rng);
    Seq y(static_cast<std::size_t>(n));
    for (auto& v : y) v = rng.normal();
    const WalkEnsemble w0 = build_walks(x, y, PairScorer::product(), 0);
    const Eigen::MatrixXd c0 = empirical_increment_cov(w0, 8, 16);
    REQUIRE(c0.rows() == 1);
    CHECK(c0(0, 0) == doctest::Approx(16.0));

    const long k = 3;
    const Seq x_full = random_pm1(n + k, rng);
    const WalkEnsemble wk = build_walks(x_full, y, PairScorer::product(), k);
    const Eigen::MatrixXd ck = empirical_increment_cov(wk, 4, 20);
    for (long i = 0; i <= k; ++i) CHECK(ck(i, i) == doctest::Approx(20.0));
    CHECK((ck - ck.transpose()).norm() == doctest::Approx(0.0));
    CHECK_THROWS(empirical_increment_cov(wk, 30, 20));
}

TEST_CASE("x-window formula is the exact conditional covariance") {
    // fixed x, fresh normal y each trial: the sampled covariance of the
    // block increment vector must match the formula entrywise within 5 se
    const long n = 20, k = 2, trials = 100000;
    CounterRng xrng(101);
    const Seq x_full = random_pm1(n + k, xrng);
    const long j = n, d = k + 1;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd mean_v = Eigen::VectorXd::Zero(d);
    std::vector<Eigen::VectorXd> vs;
    vs.reserve(trials);
    CounterRng rng(103);
    for (long t = 0; t < trials; ++t) {
        Seq y(static_cast<std::size_t>(n));
        for (auto& v : y) v = rng.normal();
        const WalkEnsemble w = build_walks(x_full, y, PairScorer::product(), k);
        Eigen::VectorXd v(d);
        for (long i = 1; i <= d; ++i) v[i - 1] = w.walk(i, n);
        mean_v += v;
        vs.push_back(std::move(v));
    }
    mean_v /= static_cast<double>(trials);
    for (const auto& v : vs) {
        const Eigen::MatrixXd outer = (v - mean_v) * (v - mean_v).transpose();
        sum += outer;
        sumsq += outer.cwiseProduct(outer);
    }
    const Eigen::MatrixXd emp = sum / static_cast<double>(trials - 1);
    Seq ydummy(static_cast<std::size_t>(n), 0.0);
    const Eigen::MatrixXd expect =
        empirical_increment_cov(build_walks(x_full, ydummy, PairScorer::product(), k), 0, j);
    for (long a = 0; a < d; ++a)
        for (long b = 0; b < d; ++b) {
            const double var_entry =
                (sumsq(a, b) / trials - std::pow(sum(a, b) / trials, 2)) / trials;
            const double se = std::sqrt(std::max(var_entry, 1e-30));
            CHECK(std::abs(emp(a, b) - expect(a, b)) <= 5.0 * se + 1e-9);
        }
}

TEST_CASE("block covariance concentrates at a calibrated rate") {
    const long k = 3, j = 100;
    CounterRng crng(107);
    const double c999 = calibrate_cov_constant(k, j, 10000, 0.999, crng);
    CHECK(c999 > 0.0);
    // fresh draws stay below the calibrated bound at roughly the quantile rate
    CounterRng rng(109);
    int over = 0;
    const int m = 2000;
    for (int t = 0; t < m; ++t) {
        Seq x_full = random_pm1(j + k, rng);
        Seq ydummy(static_cast<std::size_t>(j), 0.0);
        const WalkEnsemble w = build_walks(x_full, ydummy, PairScorer::product(), k);
        Eigen::MatrixXd sigma = empirical_increment_cov(w, 0, j);
        sigma.diagonal().array() -= static_cast<double>(j);
        if (operator_norm(sigma) >
            c999 * static_cast<double>(k) * std::sqrt(static_cast<double>(j)))
            ++over;
    }
    CHECK(over <= 20);  // ~0.1% expected, wide slack
}

TEST_CASE("coupling identity case") {
    const long d = 4;
    const double j = 50.0;
    CounterRng rng(113);
    Eigen::MatrixXd v(d, 7);
    for (long a = 0; a < d; ++a)
        for (long b = 0; b < 7; ++b) v(a, b) = rng.normal();
    const Eigen::MatrixXd sigma = j * Eigen::MatrixXd::Identity(d, d);
    const CoupleResult res = couple_to_isotropic(v, sigma, j);
    CHECK((res.coupled - v).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.deviation_bound == doctest::Approx(0.0));
}

TEST_CASE("coupling deviation bound for a diagonal perturbation") {
    const double j = 100.0, eps = 9.0;
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2, 2);
    sigma(0, 0) = j + eps;
    sigma(1, 1) = j - eps;
    Eigen::MatrixXd v = Eigen::MatrixXd::Ones(2, 1);
    const CoupleResult res = couple_to_isotropic(v, sigma, j);
    const double expect = std::max(std::pow(std::sqrt(j + eps) - std::sqrt(j), 2),
                                   std::pow(std::sqrt(j) - std::sqrt(j - eps), 2));
    CHECK(res.deviation_bound == doctest::Approx(expect).epsilon(1e-12));
    CHECK(res.deviation_bound <= eps);
}

TEST_CASE("coupling rejects non positive definite input") {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2, 2);
    sigma(0, 0) = 10.0;  // second eigenvalue 0
    Eigen::MatrixXd v = Eigen::MatrixXd::Ones(2, 1);
    CHECK_THROWS(couple_to_isotropic(v, sigma, 10.0));
}

TEST_CASE("coupling deviation bound on random positive definite matrices") {
    CounterRng rng(127);
    for (long d : {2L, 5L, 20L}) {
        for (int t = 0; t < 100; ++t) {
            const double j = 100.0;
            const double eps = 5.0 + 40.0 * rng.uniform();
            // random orthogonal-ish basis via QR of a Gaussian matrix
            Eigen::MatrixXd g(d, d);
            for (long a = 0; a < d; ++a)
                for (long b = 0; b < d; ++b) g(a, b) = rng.normal();
            const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
            Eigen::VectorXd lam(d);
            for (long a = 0; a < d; ++a) lam[a] = j - eps + 2.0 * eps * rng.uniform();
            const Eigen::MatrixXd sigma = q * lam.asDiagonal() * q.transpose();
            Eigen::MatrixXd v(d, 1);
            for (long a = 0; a < d; ++a) v(a, 0) = rng.normal();
            const CoupleResult res = couple_to_isotropic(v, sigma, j);
            CHECK(res.deviation_bound <= eps + 1e-9);
        }
    }
}

TEST_CASE("gaussian tail values and bound") {
    CHECK(gaussian_tail(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
    CHECK(gaussian_tail(1.0) <= std::exp(-0.5) / 2.0);
    CHECK(gaussian_tail(3.0) == doctest::Approx(0.0013498980316300933).epsilon(1e-9));
    CHECK(gaussian_tail(3.0) <= std::exp(-4.5) / 2.0);
    CHECK(gaussian_tail(1e-8) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_THROWS(gaussian_tail(0.0));
    CHECK_THROWS(gaussian_tail(-1.0));
}
