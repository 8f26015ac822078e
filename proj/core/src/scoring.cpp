#include "oa/scoring.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oa {

bool operator==(const ScoringMatrix& a, const ScoringMatrix& b) {
    return a.saa == b.saa && a.sab == b.sab && a.sbb == b.sbb && a.sag == b.sag &&
           a.sbg == b.sbg;
}

const ScoringMatrix& basis_matrix(int i) {
    static const std::array<ScoringMatrix, 5> kBasis = {{
        {1.0, 1.0, 1.0, 0.5, 0.5},     // S0
        {1.0, 0.0, -1.0, 0.5, -0.5},   // S1
        {1.0, -1.0, 1.0, 0.0, 0.0},    // S2
        {0.0, 0.0, 0.0, 1.0, -1.0},    // S3
        {0.0, 0.0, 0.0, 1.0, 1.0},     // S4
    }};
    if (i < 0 || i > 4) throw std::invalid_argument("basis_matrix: index out of range");
    return kBasis[static_cast<std::size_t>(i)];
}

BasisCoefficients decompose(const ScoringMatrix& s) {
    BasisCoefficients c;
    c.a0 = (s.saa + 2.0 * s.sab + s.sbb) / 4.0;
    c.a1 = (s.saa - s.sbb) / 2.0;
    c.a2 = (s.saa - 2.0 * s.sab + s.sbb) / 4.0;
    c.a4 = (s.sag + s.sbg) / 2.0 - c.a0 / 2.0;
    c.a3 = (s.sag - s.sbg) / 2.0 - c.a1 / 2.0;
    return c;
}

ScoringMatrix reconstruct(const BasisCoefficients& c) {
    const double a[5] = {c.a0, c.a1, c.a2, c.a3, c.a4};
    ScoringMatrix out;
    for (int i = 0; i < 5; ++i) {
        const ScoringMatrix& b = basis_matrix(i);
        out.saa += a[i] * b.saa;
        out.sab += a[i] * b.sab;
        out.sbb += a[i] * b.sbb;
        out.sag += a[i] * b.sag;
        out.sbg += a[i] * b.sbg;
    }
    return out;
}

double normal_part(const BasisCoefficients& c, const LetterCounts& counts, long n, long k) {
    if (k < 0 || k > n) throw std::invalid_argument("normal_part: need 0 <= k <= n");
    if (counts.na_x < 0 || counts.nb_x < 0 || counts.na_y < 0 || counts.nb_y < 0)
        throw std::invalid_argument("normal_part: negative letter count");
    if (counts.na_x + counts.nb_x != n - k)
        throw std::invalid_argument("normal_part: X counts inconsistent with n-k");
    if (counts.na_y + counts.nb_y != n)
        throw std::invalid_argument("normal_part: Y counts inconsistent with n");
    const double h_sum =
        0.5 * static_cast<double>(counts.na_x + counts.na_y - counts.nb_x - counts.nb_y);
    return c.a0 * (static_cast<double>(n) - 0.5 * static_cast<double>(k)) + c.a1 * h_sum;
}

ScoringMatrix residual_scoring(const ScoringMatrix& s) {
    BasisCoefficients c = decompose(s);
    c.a0 = 0.0;
    c.a1 = 0.0;
    return reconstruct(c);
}

ScoringMatrix read_scoring_matrix(std::istream& in) {
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("scoring matrix: expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        kv[key] = std::stod(line.substr(eq + 1));
    }
    for (const char* key : {"saa", "sab", "sbb", "sag", "sbg"})
        if (!kv.count(key))
            throw std::runtime_error(std::string("scoring matrix: missing key ") + key);
    if (kv.size() != 5) throw std::runtime_error("scoring matrix: unexpected extra keys");
    return {kv["saa"], kv["sab"], kv["sbb"], kv["sag"], kv["sbg"]};
}

ScoringMatrix load_scoring_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scoring matrix file: " + path);
    return read_scoring_matrix(in);
}

void write_scoring_matrix(std::ostream& out, const ScoringMatrix& s) {
    std::ostringstream ss;
    ss.precision(17);
    ss << "saa=" << s.saa << "\nsab=" << s.sab << "\nsbb=" << s.sbb << "\nsag=" << s.sag
       << "\nsbg=" << s.sbg << "\n";
    out << ss.str();
}

}  // namespace oa
