#pragma once

#include <array>
#include <iosfwd>
#include <string>

namespace oa {

// Symmetric scoring over the binary alphabet {a,b} plus a gap symbol.
// Only the upper triangle is stored; S(G,G) is identically 0.
// Letters are coded +1 <-> a, -1 <-> b; the gap is never a numeric code.
struct ScoringMatrix {
    double saa = 0.0;
    double sab = 0.0;
    double sbb = 0.0;
    double sag = 0.0;
    double sbg = 0.0;

    double letter_pair(double x, double y) const {
        if (x > 0.0) return y > 0.0 ? saa : sab;
        return y > 0.0 ? sab : sbb;
    }
    double letter_gap(double x) const { return x > 0.0 ? sag : sbg; }
};

bool operator==(const ScoringMatrix& a, const ScoringMatrix& b);

// Coordinates in the S0..S4 basis.
struct BasisCoefficients {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
};

struct LetterCounts {
    long na_x = 0, nb_x = 0, na_y = 0, nb_y = 0;
};

// The five basis matrices, i in [0,4].
const ScoringMatrix& basis_matrix(int i);

BasisCoefficients decompose(const ScoringMatrix& s);
ScoringMatrix reconstruct(const BasisCoefficients& c);

// Alignment-independent score contribution for |X| = n-k, |Y| = n:
// a0*(n - k/2) + a1 * sum of h over all letters of both strings,
// with h(a) = 1/2, h(b) = -1/2.
// Throws std::invalid_argument when counts are inconsistent with n, k.
double normal_part(const BasisCoefficients& c, const LetterCounts& counts, long n, long k);

// Drops the a0, a1 components.
ScoringMatrix residual_scoring(const ScoringMatrix& s);

// Plain-text format: five key=value lines saa= sab= sbb= sag= sbg=.
ScoringMatrix read_scoring_matrix(std::istream& in);
ScoringMatrix load_scoring_matrix(const std::string& path);
void write_scoring_matrix(std::ostream& out, const ScoringMatrix& s);

}  // namespace oa
