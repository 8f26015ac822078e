#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oa/scoring.hpp"

namespace oa {

// Letter sequences hold +-1 values; in the product-scoring mode the Y side
// may hold arbitrary reals.
using Seq = std::vector<double>;

Seq parse_letters(const std::string& text);  // "ab", "+-", or "01"
std::string format_letters(const Seq& seq);

// Gap positions c_1 < ... < c_k, 1-based into Y.
struct GapAlignment {
    std::vector<long> positions;
};

struct AlignedPair {
    long xi = 0, yj = 0;  // 1-based
};

struct ScoreResult {
    double score = 0.0;
    std::optional<GapAlignment> gaps;            // constrained problem witness
    std::optional<std::vector<AlignedPair>> pairs;  // unconstrained witness
};

// Scoring rule abstraction: either a ScoringMatrix over +-1 letters or the
// product rule S(x,y) = x*y with zero gap score (real-valued y allowed).
class PairScorer {
  public:
    static PairScorer matrix(const ScoringMatrix& s) { return PairScorer(s); }
    static PairScorer product() { return PairScorer(); }

    double pair(double x, double y) const { return product_ ? x * y : mat_.letter_pair(x, y); }
    double gap(double y) const { return product_ ? 0.0 : mat_.letter_gap(y); }
    bool is_product() const { return product_; }

  private:
    PairScorer() : product_(true) {}
    explicit PairScorer(const ScoringMatrix& s) : product_(false), mat_(s) {}
    bool product_;
    ScoringMatrix mat_{};
};

// Unconstrained optimum over all alignments with gaps (no gap-gap pairs);
// lengths may differ.
ScoreResult align_full(const Seq& x, const Seq& y, const ScoringMatrix& s,
                       bool want_witness = false);

// Exactly-k-gaps optimum, all gaps against letters of Y.
// Requires |X| = |Y| - k. O(n k) time; O(k) memory unless a witness is
// requested (then the full table is kept and the lexicographically smallest
// optimal gap set is returned).
ScoreResult align_kgap(const Seq& x, const Seq& y, const PairScorer& scorer, long k,
                       bool want_witness = false);
ScoreResult align_kgap(const Seq& x, const Seq& y, const ScoringMatrix& s, long k,
                       bool want_witness = false);

// Exact maximum by enumerating all C(n,k) gap sets; test oracle.
// Rejects instances with C(n,k) > 10^6.
ScoreResult kgap_bruteforce(const Seq& x, const Seq& y, const PairScorer& scorer, long k);

// Score of one fixed gap set under the given scorer.
double kgap_score(const Seq& x, const Seq& y, const PairScorer& scorer,
                  const GapAlignment& gaps);

// Score of one unconstrained alignment witness (aligned pairs + implied gaps).
double alignment_score(const Seq& x, const Seq& y, const ScoringMatrix& s,
                       const std::vector<AlignedPair>& pairs);

}  // namespace oa
