#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oa/align.hpp"
#include "oa/rng.hpp"
#include "oa/scoring.hpp"
#include "oa/stats.hpp"

namespace oa {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LetterModel { Binary, BinaryXNormalY };
enum class GapMode { None, Fixed, Power, Linear };
enum class ScoringKind { Product, Matrix };

struct ExperimentConfig {
    LetterModel letter_model = LetterModel::Binary;
    double pa = 0.5;
    bool letters01 = false;  // 0/1 numeric codes instead of +-1 (product mode)
    ScoringKind scoring = ScoringKind::Product;
    std::string matrix_file;
    ScoringMatrix matrix{};
    GapMode gap_mode = GapMode::Fixed;
    double gap_value = 0.0;  // k, alpha, or rho
    std::vector<long> n_grid;
    long trials = 1;
    std::uint64_t master_seed = 0;
    long grid_factor = 64;   // Brownian grid policy factor
    double cov_const = 5.0;  // constant of the covariance-concentration event
    double op_ceiling = 1e11;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
    long gaps_for(long n) const;
    // E[S(X1, Y1)] under this config's scoring rule and letter model.
    double mean_step() const;
    std::uint64_t hash() const;
};

// Plain-text key=value config; unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

struct ExperimentRow {
    long n = 0;
    long k = 0;
    SummaryStats raw;
    SummaryStats rescaled;
    double ks_tw = 0.0;
    double ks_normal = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::optional<ExponentFit> fit;  // over (n, stddev of raw score)
    std::uint64_t master_seed = 0;
    std::uint64_t config_hash = 0;
    // raw scores per grid cell, trial-indexed (kept for cross-checks)
    std::vector<std::vector<double>> raw_scores;
    std::vector<std::vector<double>> rescaled_scores;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

void write_report_csv(std::ostream& out, const ExperimentReport& report);

struct DiagnosticsRow {
    long n = 0, k = 0, j = 0;
    double pass_a = 0.0, pass_f = 0.0, pass_g = 0.0, pass_d = 0.0;
    double delta_n = 0.0;
};

struct DiagnosticsReport {
    std::vector<DiagnosticsRow> rows;
};

// Monte Carlo pass rates of the covariance-concentration (A), Brownian (F)
// and walk (G) excursion-control, and mesh-closeness (D) events, with mesh
// size j = floor(n^beta). Requires the binaryX-normalY model.
DiagnosticsReport run_event_diagnostics(const ExperimentConfig& cfg, double beta);

void write_diagnostics_csv(std::ostream& out, const DiagnosticsReport& report);

// Standard-normal CDF.
double normal_cdf(double x);

// Sample helpers (letters are value_a/value_b per the config's encoding).
Seq sample_letters(long len, double pa, bool letters01, CounterRng& rng);
Seq sample_normals(long len, CounterRng& rng);

}  // namespace oa
