#include "oa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "oa/brownian.hpp"
#include "oa/walks.hpp"

namespace oa {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Seq sample_letters(long len, double pa, bool letters01, CounterRng& rng) {
    Seq out(static_cast<std::size_t>(len));
    const double b = letters01 ? 0.0 : -1.0;
    for (auto& v : out) v = rng.uniform() < pa ? 1.0 : b;
    return out;
}

Seq sample_normals(long len, CounterRng& rng) {
    Seq out(static_cast<std::size_t>(len));
    for (auto& v : out) v = rng.normal();
    return out;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw UsageError("config: trials must be >= 1");
    if (n_grid.empty()) throw UsageError("config: n_grid must be nonempty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw UsageError("config: n values must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw UsageError("config: n_grid must be strictly increasing");
    }
    if (pa <= 0.0 || pa >= 1.0) throw UsageError("config: pa must be in (0,1)");
    if (gap_mode == GapMode::Fixed && gap_value < 0.0)
        throw UsageError("config: fixed gap count must be >= 0");
    if ((gap_mode == GapMode::Power || gap_mode == GapMode::Linear) &&
        (gap_value <= 0.0 || gap_value >= 1.0))
        throw UsageError("config: alpha/rho must be in (0,1)");
    if (letter_model == LetterModel::BinaryXNormalY && scoring != ScoringKind::Product)
        throw UsageError("config: the normal-Y model requires product scoring");
    if (letter_model == LetterModel::BinaryXNormalY && gap_mode == GapMode::None)
        throw UsageError("config: the normal-Y model requires a gap mode");
    for (long n : n_grid) {
        const long k = gaps_for(n);
        if (k > n) throw UsageError("config: derived gap count exceeds n");
    }
}

long ExperimentConfig::gaps_for(long n) const {
    switch (gap_mode) {
        case GapMode::None: return 0;
        case GapMode::Fixed: return std::lround(gap_value);
        case GapMode::Power:
            return static_cast<long>(std::floor(std::pow(static_cast<double>(n), gap_value)));
        case GapMode::Linear:
            return static_cast<long>(std::floor(gap_value * static_cast<double>(n)));
    }
    return 0;
}

double ExperimentConfig::mean_step() const {
    if (scoring == ScoringKind::Product) {
        const double ma = letters01 ? pa : 2.0 * pa - 1.0;
        const double my = letter_model == LetterModel::BinaryXNormalY ? 0.0 : ma;
        return ma * my;
    }
    double m = 0.0;
    for (double x : {1.0, -1.0})
        for (double y : {1.0, -1.0}) {
            const double px = x > 0 ? pa : 1.0 - pa;
            const double py = y > 0 ? pa : 1.0 - pa;
            m += px * py * matrix.letter_pair(x, y);
        }
    return m;
}

std::uint64_t ExperimentConfig::hash() const {
    std::ostringstream ss;
    ss.precision(17);
    ss << static_cast<int>(letter_model) << '|' << pa << '|' << letters01 << '|'
       << static_cast<int>(scoring) << '|' << matrix.saa << ',' << matrix.sab << ','
       << matrix.sbb << ',' << matrix.sag << ',' << matrix.sbg << '|'
       << static_cast<int>(gap_mode) << '|' << gap_value << '|';
    for (long n : n_grid) ss << n << ',';
    ss << '|' << trials << '|' << grid_factor << '|' << cov_const;
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : ss.str()) h = mix64(h ^ static_cast<unsigned char>(c));
    return h;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    auto as_double = [&](const std::string& v) {
        try {
            return std::stod(v);
        } catch (const std::exception&) {
            throw UsageError("config: bad numeric value for " + key + ": " + v);
        }
    };
    if (key == "letter_model") {
        if (value == "binary") cfg.letter_model = LetterModel::Binary;
        else if (value == "binary-normal") cfg.letter_model = LetterModel::BinaryXNormalY;
        else throw UsageError("config: letter_model must be binary or binary-normal");
    } else if (key == "pa") {
        cfg.pa = as_double(value);
    } else if (key == "letters") {
        if (value == "pm1") cfg.letters01 = false;
        else if (value == "01") cfg.letters01 = true;
        else throw UsageError("config: letters must be pm1 or 01");
    } else if (key == "scoring") {
        if (value == "product") cfg.scoring = ScoringKind::Product;
        else if (value == "matrix") cfg.scoring = ScoringKind::Matrix;
        else throw UsageError("config: scoring must be product or matrix");
    } else if (key == "matrix_file") {
        cfg.matrix_file = value;
        cfg.scoring = ScoringKind::Matrix;
        cfg.matrix = load_scoring_matrix(value);
    } else if (key == "gap_mode") {
        if (value == "none") cfg.gap_mode = GapMode::None;
        else if (value == "fixed") cfg.gap_mode = GapMode::Fixed;
        else if (value == "power") cfg.gap_mode = GapMode::Power;
        else if (value == "linear") cfg.gap_mode = GapMode::Linear;
        else throw UsageError("config: gap_mode must be none|fixed|power|linear");
    } else if (key == "gap_value") {
        cfg.gap_value = as_double(value);
    } else if (key == "n_grid") {
        cfg.n_grid.clear();
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) cfg.n_grid.push_back(std::stol(tok));
    } else if (key == "trials") {
        cfg.trials = std::stol(value);
    } else if (key == "master_seed") {
        cfg.master_seed = std::stoull(value);
    } else if (key == "grid_factor") {
        cfg.grid_factor = std::stol(value);
    } else if (key == "cov_const") {
        cfg.cov_const = as_double(value);
    } else if (key == "op_ceiling") {
        cfg.op_ceiling = as_double(value);
    } else if (key == "threads") {
        cfg.threads = static_cast<int>(std::stol(value));
    } else {
        throw UsageError("config: unknown key '" + key + "'");
    }
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config: expected key=value, got '" + line + "'");
        apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    return parse_config(in);
}

namespace {

int worker_count(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Dispatches [0, total) to a pool; results must be written to
// preassigned slots so the outcome is independent of scheduling.
void parallel_for(long total, int threads, const std::function<void(long)>& body) {
    if (threads <= 1 || total <= 1) {
        for (long i = 0; i < total; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex err_mx;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const long i = next.fetch_add(1);
                if (i >= total || failed.load()) break;
                try {
                    body(i);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(err_mx);
                    failed.store(true);
                    if (error.empty()) error = e.what();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) throw NumericError("worker failure: " + error);
}

double run_one_trial(const ExperimentConfig& cfg, long n, long k, CounterRng& rng) {
    const Seq x = sample_letters(n - k, cfg.pa, cfg.letters01, rng);
    const Seq y = cfg.letter_model == LetterModel::BinaryXNormalY
                      ? sample_normals(n, rng)
                      : sample_letters(n, cfg.pa, cfg.letters01, rng);
    if (cfg.gap_mode == GapMode::None) {
        ScoringMatrix s;
        if (cfg.scoring == ScoringKind::Matrix) {
            s = cfg.matrix;
        } else if (cfg.letters01) {
            s = ScoringMatrix{1.0, 0.0, 0.0, 0.0, 0.0};  // product over {0,1}
        } else {
            s = basis_matrix(2);  // product over {-1,+1}
        }
        return align_full(x, y, s).score;
    }
    const PairScorer scorer = cfg.scoring == ScoringKind::Product
                                  ? PairScorer::product()
                                  : PairScorer::matrix(cfg.matrix);
    return align_kgap(x, y, scorer, k).score;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    double budget = 0.0;
    for (long n : cfg.n_grid) {
        const double work = cfg.gap_mode == GapMode::None
                                ? static_cast<double>(n) * static_cast<double>(n)
                                : static_cast<double>(n) *
                                      static_cast<double>(std::max<long>(cfg.gaps_for(n), 1));
        budget += static_cast<double>(cfg.trials) * work;
    }
    if (budget > cfg.op_ceiling)
        throw BudgetError("experiment work " + std::to_string(budget) +
                          " exceeds op ceiling " + std::to_string(cfg.op_ceiling));

    ExperimentReport report;
    report.master_seed = cfg.master_seed;
    report.config_hash = cfg.hash();
    const double mean_step = cfg.mean_step();
    const long cells = static_cast<long>(cfg.n_grid.size());
    report.raw_scores.assign(static_cast<std::size_t>(cells),
                             std::vector<double>(static_cast<std::size_t>(cfg.trials)));
    report.rescaled_scores = report.raw_scores;

    const long total = cells * cfg.trials;
    parallel_for(total, worker_count(cfg.threads), [&](long unit) {
        const long ni = unit / cfg.trials;
        const long trial = unit % cfg.trials;
        const long n = cfg.n_grid[static_cast<std::size_t>(ni)];
        const long k = cfg.gaps_for(n);
        CounterRng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(ni),
                                   static_cast<std::uint64_t>(trial)));
        const double score = run_one_trial(cfg, n, k, rng);
        const double rescaled =
            k >= 1 ? theorem1_statistic(score, n, k, mean_step)
                   : (score - static_cast<double>(n) * mean_step) /
                         std::sqrt(static_cast<double>(n));
        report.raw_scores[static_cast<std::size_t>(ni)][static_cast<std::size_t>(trial)] = score;
        report.rescaled_scores[static_cast<std::size_t>(ni)][static_cast<std::size_t>(trial)] =
            rescaled;
    });

    std::vector<std::pair<double, double>> fit_points;
    for (long ni = 0; ni < cells; ++ni) {
        ExperimentRow row;
        row.n = cfg.n_grid[static_cast<std::size_t>(ni)];
        row.k = cfg.gaps_for(row.n);
        const auto& raw = report.raw_scores[static_cast<std::size_t>(ni)];
        const auto& resc = report.rescaled_scores[static_cast<std::size_t>(ni)];
        row.raw = summarize(raw);
        row.rescaled = summarize(resc);
        row.ks_tw = tw_ks(resc);
        const double mu = row.rescaled.mean;
        const double sd = std::max(row.rescaled.stddev, 1e-12);
        row.ks_normal =
            ks_distance(resc, [&](double v) { return normal_cdf((v - mu) / sd); });
        if (row.raw.stddev > 0.0)
            fit_points.emplace_back(static_cast<double>(row.n), row.raw.stddev);
        report.rows.push_back(row);
    }
    if (fit_points.size() >= 2) report.fit = loglog_fit(fit_points);
    return report;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "n,k,trials,mean,stddev,var,mean_rescaled,ks_tw,ks_normal\n";
    std::ostringstream ss;
    ss.precision(12);
    for (const auto& row : report.rows) {
        ss << row.n << ',' << row.k << ',' << row.raw.count << ',' << row.raw.mean << ','
           << row.raw.stddev << ',' << row.raw.variance << ',' << row.rescaled.mean << ','
           << row.ks_tw << ',' << row.ks_normal << '\n';
    }
    out << ss.str();
}

namespace {

struct TrialEvents {
    bool a = true, f = true, g = true, d = true;
};

TrialEvents diagnostics_trial(const ExperimentConfig& cfg, long n, long k, long j,
                              CounterRng& rng) {
    const double log_n = std::log(static_cast<double>(n));
    const double sqrt_j = std::sqrt(static_cast<double>(j));
    const double excursion_bound = log_n * sqrt_j;
    const double mesh_bound = log_n * std::sqrt(static_cast<double>(k)) *
                              std::sqrt(static_cast<double>(n)) /
                              std::pow(static_cast<double>(j), 0.25);
    const double cov_bound = cfg.cov_const * static_cast<double>(std::max<long>(k, 1)) * sqrt_j;

    const WalkEnsemble walks = sample_walks(n, k, PairScorer::product(), cfg.pa, true, rng);
    const long d = k + 1;
    const long blocks = n / j;
    TrialEvents ev;
    Eigen::VectorXd mesh_gap = Eigen::VectorXd::Zero(d);  // C(ij) - R(ij), per component
    Eigen::VectorXd v(d);
    std::vector<double> bridge(static_cast<std::size_t>(j + 1));
    double max_mesh_gap = 0.0;
    for (long b = 0; b < blocks; ++b) {
        const long bs = b * j;
        // A: block covariance concentration
        Eigen::MatrixXd sigma = empirical_increment_cov(walks, bs, j);
        Eigen::MatrixXd centered = sigma;
        centered.diagonal().array() -= static_cast<double>(j);
        if (operator_norm(centered) > cov_bound) ev.a = false;

        // G: walk excursions inside the block
        for (long i = 1; i <= d && ev.g; ++i) {
            const double base = walks.walk(i, bs);
            for (long t = 1; t <= j; ++t) {
                if (std::abs(walks.walk(i, bs + t) - base) > excursion_bound) {
                    ev.g = false;
                    break;
                }
            }
        }

        // couple the block increment to an isotropic Gaussian
        for (long i = 1; i <= d; ++i) v[i - 1] = walks.walk(i, bs + j) - walks.walk(i, bs);
        Eigen::VectorXd coupled;
        try {
            coupled = couple_to_isotropic(v, sigma, static_cast<double>(j)).coupled;
        } catch (const std::invalid_argument&) {
            ev.a = false;
            ev.d = false;
            coupled = v;
        }
        mesh_gap += coupled - v;
        max_mesh_gap = std::max(max_mesh_gap, mesh_gap.cwiseAbs().maxCoeff());

        // F: within-block excursions of the coupled Brownian path, realized as
        // a bridge pinned to the coupled increment.
        for (long i = 0; i < d && ev.f; ++i) {
            bridge[0] = 0.0;
            for (long t = 1; t <= j; ++t)
                bridge[static_cast<std::size_t>(t)] =
                    bridge[static_cast<std::size_t>(t - 1)] + rng.normal();
            const double endpoint = bridge[static_cast<std::size_t>(j)];
            for (long t = 1; t <= j; ++t) {
                const double frac = static_cast<double>(t) / static_cast<double>(j);
                const double val =
                    bridge[static_cast<std::size_t>(t)] + frac * (coupled[i] - endpoint);
                if (std::abs(val) > excursion_bound) {
                    ev.f = false;
                    break;
                }
            }
        }
    }
    if (max_mesh_gap > mesh_bound) ev.d = false;
    return ev;
}

}  // namespace

DiagnosticsReport run_event_diagnostics(const ExperimentConfig& cfg, double beta) {
    cfg.validate();
    if (cfg.letter_model != LetterModel::BinaryXNormalY)
        throw UsageError("diagnostics require the binary-normal letter model");
    if (beta <= 0.0 || beta >= 1.0) throw UsageError("diagnostics: beta must be in (0,1)");

    DiagnosticsReport report;
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        const long n = cfg.n_grid[ni];
        const long k = cfg.gaps_for(n);
        const long j = static_cast<long>(std::floor(std::pow(static_cast<double>(n), beta)));
        if (j < k) throw UsageError("diagnostics: mesh j < k at n=" + std::to_string(n));
        if (j < 1 || n / j < 1) throw UsageError("diagnostics: empty mesh");

        std::vector<TrialEvents> events(static_cast<std::size_t>(cfg.trials));
        parallel_for(cfg.trials, worker_count(cfg.threads), [&](long trial) {
            CounterRng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(ni),
                                       static_cast<std::uint64_t>(trial)));
            events[static_cast<std::size_t>(trial)] = diagnostics_trial(cfg, n, k, j, rng);
        });

        DiagnosticsRow row;
        row.n = n;
        row.k = k;
        row.j = j;
        const double m = static_cast<double>(cfg.trials);
        for (const auto& ev : events) {
            row.pass_a += ev.a ? 1.0 : 0.0;
            row.pass_f += ev.f ? 1.0 : 0.0;
            row.pass_g += ev.g ? 1.0 : 0.0;
            row.pass_d += ev.d ? 1.0 : 0.0;
        }
        row.pass_a /= m;
        row.pass_f /= m;
        row.pass_g /= m;
        row.pass_d /= m;
        const double log_n = std::log(static_cast<double>(n));
        row.delta_n = 4.0 * std::max(log_n * std::sqrt(static_cast<double>(j)) /
                                         std::sqrt(static_cast<double>(n)),
                                     log_n * std::sqrt(static_cast<double>(k)) /
                                         std::pow(static_cast<double>(j), 0.25));
        report.rows.push_back(row);
    }
    return report;
}

void write_diagnostics_csv(std::ostream& out, const DiagnosticsReport& report) {
    out << "n,k,j,pass_a,pass_f,pass_g,pass_d,delta_n\n";
    std::ostringstream ss;
    ss.precision(12);
    for (const auto& row : report.rows)
        ss << row.n << ',' << row.k << ',' << row.j << ',' << row.pass_a << ',' << row.pass_f
           << ',' << row.pass_g << ',' << row.pass_d << ',' << row.delta_n << '\n';
    out << ss.str();
}

}  // namespace oa
