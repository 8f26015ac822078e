#include "oa/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oa {

namespace {
constexpr double kNeg = -1e300;
constexpr double kWitnessTol = 1e-9;

void check_kgap_sizes(const Seq& x, const Seq& y, long k) {
    const long n = static_cast<long>(y.size());
    if (k < 0 || k > n) throw std::invalid_argument("align_kgap: need 0 <= k <= |Y|");
    if (static_cast<long>(x.size()) != n - k)
        throw std::invalid_argument("align_kgap: need |X| = |Y| - k");
}

// C(n,k) with saturation at `cap`+1.
double binomial_capped(long n, long k, double cap) {
    double v = 1.0;
    k = std::min(k, n - k);
    for (long i = 1; i <= k; ++i) {
        v *= static_cast<double>(n - k + i) / static_cast<double>(i);
        if (v > cap) return cap + 1.0;
    }
    return v;
}
}  // namespace

Seq parse_letters(const std::string& text) {
    Seq out;
    out.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
            case 'a': case 'A': case '+': case '1': out.push_back(1.0); break;
            case 'b': case 'B': case '-': case '0': out.push_back(-1.0); break;
            case ' ': case '\n': case '\t': break;
            default:
                throw std::invalid_argument(std::string("unknown letter '") + ch + "'");
        }
    }
    return out;
}

std::string format_letters(const Seq& seq) {
    std::string out;
    out.reserve(seq.size());
    for (double v : seq) out.push_back(v > 0.0 ? 'a' : 'b');
    return out;
}

ScoreResult align_full(const Seq& x, const Seq& y, const ScoringMatrix& s, bool want_witness) {
    const long nx = static_cast<long>(x.size());
    const long ny = static_cast<long>(y.size());
    std::vector<double> dp(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    auto at = [&](long i, long j) -> double& { return dp[static_cast<std::size_t>(i * (ny + 1) + j)]; };
    at(0, 0) = 0.0;
    for (long i = 1; i <= nx; ++i) at(i, 0) = at(i - 1, 0) + s.letter_gap(x[i - 1]);
    for (long j = 1; j <= ny; ++j) at(0, j) = at(0, j - 1) + s.letter_gap(y[j - 1]);
    for (long i = 1; i <= nx; ++i) {
        for (long j = 1; j <= ny; ++j) {
            const double diag = at(i - 1, j - 1) + s.letter_pair(x[i - 1], y[j - 1]);
            const double up = at(i - 1, j) + s.letter_gap(x[i - 1]);
            const double left = at(i, j - 1) + s.letter_gap(y[j - 1]);
            at(i, j) = std::max({diag, up, left});
        }
    }
    ScoreResult res;
    res.score = at(nx, ny);
    if (want_witness) {
        std::vector<AlignedPair> pairs;
        long i = nx, j = ny;
        while (i > 0 && j > 0) {
            const double v = at(i, j);
            if (v == at(i - 1, j - 1) + s.letter_pair(x[i - 1], y[j - 1])) {
                pairs.push_back({i, j});
                --i; --j;
            } else if (v == at(i - 1, j) + s.letter_gap(x[i - 1])) {
                --i;
            } else {
                --j;
            }
        }
        std::reverse(pairs.begin(), pairs.end());
        res.pairs = std::move(pairs);
    }
    return res;
}

double alignment_score(const Seq& x, const Seq& y, const ScoringMatrix& s,
                       const std::vector<AlignedPair>& pairs) {
    std::vector<bool> used_x(x.size(), false), used_y(y.size(), false);
    double score = 0.0;
    long prev_i = 0, prev_j = 0;
    for (const auto& p : pairs) {
        if (p.xi <= prev_i || p.yj <= prev_j)
            throw std::invalid_argument("alignment_score: pairs not strictly increasing");
        prev_i = p.xi;
        prev_j = p.yj;
        used_x[static_cast<std::size_t>(p.xi - 1)] = true;
        used_y[static_cast<std::size_t>(p.yj - 1)] = true;
        score += s.letter_pair(x[static_cast<std::size_t>(p.xi - 1)],
                               y[static_cast<std::size_t>(p.yj - 1)]);
    }
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!used_x[i]) score += s.letter_gap(x[i]);
    for (std::size_t j = 0; j < y.size(); ++j)
        if (!used_y[j]) score += s.letter_gap(y[j]);
    return score;
}

ScoreResult align_kgap(const Seq& x, const Seq& y, const PairScorer& scorer, long k,
                       bool want_witness) {
    check_kgap_sizes(x, y, k);
    const long n = static_cast<long>(y.size());
    const long nx = n - k;
    ScoreResult res;

    if (!want_witness) {
        // Rolling column over the gap count.
        std::vector<double> m(static_cast<std::size_t>(k + 1), kNeg);
        m[0] = 0.0;
        for (long j = 1; j <= n; ++j) {
            const double yj = y[static_cast<std::size_t>(j - 1)];
            const long gmax = std::min(k, j);
            for (long g = gmax; g >= 0; --g) {
                const long xi = j - g;
                double best = kNeg;
                if (xi >= 1 && xi <= nx && m[static_cast<std::size_t>(g)] > kNeg)
                    best = m[static_cast<std::size_t>(g)] +
                           scorer.pair(x[static_cast<std::size_t>(xi - 1)], yj);
                if (g >= 1 && m[static_cast<std::size_t>(g - 1)] > kNeg)
                    best = std::max(best, m[static_cast<std::size_t>(g - 1)] + scorer.gap(yj));
                m[static_cast<std::size_t>(g)] = best;
            }
        }
        res.score = m[static_cast<std::size_t>(k)];
        return res;
    }

    // Suffix table B[j][u]: best score over positions j..n given u gaps already
    // placed before j. A greedy front-to-back pass that takes a gap whenever it
    // preserves optimality yields the lexicographically smallest gap set.
    const std::size_t cols = static_cast<std::size_t>(k + 1);
    std::vector<double> b(static_cast<std::size_t>(n + 2) * cols, kNeg);
    auto at = [&](long j, long u) -> double& { return b[static_cast<std::size_t>(j) * cols + static_cast<std::size_t>(u)]; };
    at(n + 1, k) = 0.0;
    for (long j = n; j >= 1; --j) {
        const double yj = y[static_cast<std::size_t>(j - 1)];
        for (long u = 0; u <= std::min(k, j - 1); ++u) {
            const long xi = j - u;
            double best = kNeg;
            if (xi >= 1 && xi <= nx && at(j + 1, u) > kNeg)
                best = scorer.pair(x[static_cast<std::size_t>(xi - 1)], yj) + at(j + 1, u);
            if (u < k && at(j + 1, u + 1) > kNeg)
                best = std::max(best, scorer.gap(yj) + at(j + 1, u + 1));
            at(j, u) = best;
        }
    }
    res.score = at(1, 0);
    GapAlignment gaps;
    long u = 0;
    for (long j = 1; j <= n && u < k; ++j) {
        const double yj = y[static_cast<std::size_t>(j - 1)];
        if (scorer.gap(yj) + at(j + 1, u + 1) >= at(j, u) - kWitnessTol) {
            gaps.positions.push_back(j);
            ++u;
        }
    }
    res.gaps = std::move(gaps);
    return res;
}

ScoreResult align_kgap(const Seq& x, const Seq& y, const ScoringMatrix& s, long k,
                       bool want_witness) {
    return align_kgap(x, y, PairScorer::matrix(s), k, want_witness);
}

double kgap_score(const Seq& x, const Seq& y, const PairScorer& scorer,
                  const GapAlignment& gaps) {
    const long n = static_cast<long>(y.size());
    const long k = static_cast<long>(gaps.positions.size());
    check_kgap_sizes(x, y, k);
    long prev = 0;
    for (long c : gaps.positions) {
        if (c <= prev || c > n)
            throw std::invalid_argument("kgap_score: gap positions must be strictly increasing in [1,n]");
        prev = c;
    }
    double score = 0.0;
    long g = 0;
    for (long j = 1; j <= n; ++j) {
        const double yj = y[static_cast<std::size_t>(j - 1)];
        if (g < k && gaps.positions[static_cast<std::size_t>(g)] == j) {
            score += scorer.gap(yj);
            ++g;
        } else {
            score += scorer.pair(x[static_cast<std::size_t>(j - g - 1)], yj);
        }
    }
    return score;
}

ScoreResult kgap_bruteforce(const Seq& x, const Seq& y, const PairScorer& scorer, long k) {
    check_kgap_sizes(x, y, k);
    const long n = static_cast<long>(y.size());
    if (binomial_capped(n, k, 1e6) > 1e6)
        throw std::invalid_argument("kgap_bruteforce: C(n,k) exceeds enumeration budget");
    GapAlignment current;
    current.positions.resize(static_cast<std::size_t>(k));
    for (long i = 0; i < k; ++i) current.positions[static_cast<std::size_t>(i)] = i + 1;
    ScoreResult best;
    best.score = kNeg;
    while (true) {
        const double sc = kgap_score(x, y, scorer, current);
        if (sc > best.score + kWitnessTol ||
            (sc > best.score - kWitnessTol && !best.gaps)) {
            best.score = std::max(best.score, sc);
            best.gaps = current;
        }
        if (k == 0) break;
        // next combination
        long i = k - 1;
        while (i >= 0 && current.positions[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++current.positions[static_cast<std::size_t>(i)];
        for (long t = i + 1; t < k; ++t)
            current.positions[static_cast<std::size_t>(t)] =
                current.positions[static_cast<std::size_t>(t - 1)] + 1;
    }
    return best;
}

}  // namespace oa
