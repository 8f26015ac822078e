// Command-line front end: decompose, align, walks, brownian, simulate,
// diagnose, exponent. CSV goes to stdout unless --out is given.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oa/align.hpp"
#include "oa/brownian.hpp"
#include "oa/harness.hpp"
#include "oa/scoring.hpp"
#include "oa/stats.hpp"
#include "oa/walks.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNumeric = 4;

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Output sink: stdout or --out file.
class Sink {
  public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw oa::UsageError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

oa::Seq read_letters_arg(const std::string& inline_text, const std::string& file) {
    if (!inline_text.empty() && !file.empty())
        throw oa::UsageError("give the sequence inline or as a file, not both");
    if (!inline_text.empty()) return oa::parse_letters(inline_text);
    if (file.empty()) throw oa::UsageError("missing input sequence");
    std::ifstream in(file);
    if (!in) throw oa::UsageError("cannot open sequence file: " + file);
    std::string text, line;
    while (std::getline(in, line)) text += line;
    return oa::parse_letters(text);
}

struct CommonExperimentArgs {
    std::string config_file;
    std::vector<std::string> overrides;  // key=value collected from flags
    std::string out;
    bool has_seed = false;
    std::uint64_t seed = 0;
};

void add_experiment_flags(CLI::App* cmd, CommonExperimentArgs& args) {
    cmd->add_option("--config", args.config_file, "key=value config file");
    cmd->add_option("--out", args.out, "write CSV here instead of stdout");
    auto push = [&args](const std::string& key) {
        return [&args, key](const std::string& v) { args.overrides.push_back(key + "=" + v); };
    };
    cmd->add_option_function<std::string>("--letter-model", push("letter_model"),
                                          "binary | binary-normal");
    cmd->add_option_function<std::string>("--pa", push("pa"), "P(letter a)");
    cmd->add_option_function<std::string>("--letters", push("letters"), "pm1 | 01");
    cmd->add_option_function<std::string>("--scoring", push("scoring"), "product | matrix");
    cmd->add_option_function<std::string>("--matrix", push("matrix_file"),
                                          "scoring-matrix file");
    cmd->add_option_function<std::string>("--gap-mode", push("gap_mode"),
                                          "none | fixed | power | linear");
    cmd->add_option_function<std::string>("--gap-value", push("gap_value"),
                                          "k, alpha, or rho per --gap-mode");
    cmd->add_option_function<std::string>("--n", push("n_grid"),
                                          "comma-separated n grid");
    cmd->add_option_function<std::string>("--trials", push("trials"), "trials per cell");
    cmd->add_option_function<std::string>("--grid-factor", push("grid_factor"),
                                          "Brownian grid policy factor");
    cmd->add_option_function<std::string>("--cov-const", push("cov_const"),
                                          "covariance-concentration constant");
    cmd->add_option_function<std::string>("--op-ceiling", push("op_ceiling"),
                                          "work budget ceiling");
    cmd->add_option_function<std::string>("--threads", push("threads"), "worker threads");
    cmd->add_option("--seed", args.seed, "master seed (required)")
        ->required()
        ->each([&args](const std::string&) { args.has_seed = true; });
}

oa::ExperimentConfig build_config(const CommonExperimentArgs& args) {
    oa::ExperimentConfig cfg;
    if (!args.config_file.empty()) cfg = oa::load_config(args.config_file);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        oa::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.master_seed = args.seed;
    return cfg;
}

int run_decompose(const std::string& matrix_file) {
    const oa::ScoringMatrix s = oa::load_scoring_matrix(matrix_file);
    const oa::BasisCoefficients c = oa::decompose(s);
    std::cout << "a0=" << fmt_num(c.a0) << " a1=" << fmt_num(c.a1) << " a2=" << fmt_num(c.a2)
              << " a3=" << fmt_num(c.a3) << " a4=" << fmt_num(c.a4) << "\n";
    return 0;
}

int run_align(const std::string& x_inline, const std::string& x_file,
              const std::string& y_inline, const std::string& y_file,
              const std::string& matrix_file, bool product, long k, bool has_k,
              bool witness) {
    const oa::Seq x = read_letters_arg(x_inline, x_file);
    const oa::Seq y = read_letters_arg(y_inline, y_file);
    if (product && !matrix_file.empty())
        throw oa::UsageError("--product and --matrix are mutually exclusive");
    oa::ScoreResult res;
    if (has_k) {
        const oa::PairScorer scorer = product
                                          ? oa::PairScorer::product()
                                          : oa::PairScorer::matrix(
                                                oa::load_scoring_matrix(matrix_file));
        res = oa::align_kgap(x, y, scorer, k, witness);
    } else {
        if (product) throw oa::UsageError("--product requires --k");
        res = oa::align_full(x, y, oa::load_scoring_matrix(matrix_file), witness);
    }
    std::cout << "score=" << fmt_num(res.score) << "\n";
    if (witness && res.gaps) {
        std::cout << "gaps=";
        for (std::size_t i = 0; i < res.gaps->positions.size(); ++i)
            std::cout << (i ? "," : "") << res.gaps->positions[i];
        std::cout << "\n";
    }
    return 0;
}

int run_walks(long n, long k, double pa, bool normal_y, std::uint64_t seed,
              bool covariances, long block, const std::string& out) {
    if (n < 1 || k < 0 || k > n) throw oa::UsageError("walks: need 1 <= n and 0 <= k <= n");
    oa::CounterRng rng(seed);
    const oa::WalkEnsemble walks =
        oa::sample_walks(n, k, oa::PairScorer::product(), pa, normal_y, rng);
    Sink sink(out);
    auto& os = sink.stream();
    os << "i,j,value\n";
    if (covariances) {
        if (block < 1 || block > n) throw oa::UsageError("walks: need 1 <= --block <= n");
        for (long b = 0; b + block <= n; b += block) {
            const Eigen::MatrixXd cov = oa::empirical_increment_cov(walks, b, block);
            for (long i = 0; i < cov.rows(); ++i)
                for (long j = 0; j < cov.cols(); ++j)
                    os << (b / block) * (k + 1) + i + 1 << ',' << j + 1 << ','
                       << fmt_num(cov(i, j)) << "\n";
        }
    } else {
        for (long i = 1; i <= k + 1; ++i)
            for (long j = 1; j <= n; ++j)
                os << i << ',' << j << ',' << fmt_num(walks.increment(i, j)) << "\n";
    }
    return 0;
}

int run_brownian(long k, long grid, long trials, std::uint64_t seed,
                 const std::string& out) {
    if (k < 1 || trials < 1) throw oa::UsageError("brownian: need k >= 1, trials >= 1");
    const long T = grid > 0 ? grid : oa::default_grid(k);
    Sink sink(out);
    auto& os = sink.stream();
    os << "trial,lk,rescaled\n";
    for (long t = 0; t < trials; ++t) {
        oa::CounterRng rng(oa::derive_seed(seed, 0, static_cast<std::uint64_t>(t)));
        const double lk = oa::lk_functional(oa::sample_bm(k, T, rng));
        os << t << ',' << fmt_num(lk) << ',' << fmt_num(oa::tw_rescale(lk, k)) << "\n";
    }
    return 0;
}

int run_simulate(const CommonExperimentArgs& args) {
    const oa::ExperimentConfig cfg = build_config(args);
    const oa::ExperimentReport report = oa::run_experiment(cfg);
    Sink sink(args.out);
    oa::write_report_csv(sink.stream(), report);
    return 0;
}

int run_diagnose(const CommonExperimentArgs& args, double beta) {
    const oa::ExperimentConfig cfg = build_config(args);
    const oa::DiagnosticsReport report = oa::run_event_diagnostics(cfg, beta);
    Sink sink(args.out);
    oa::write_diagnostics_csv(sink.stream(), report);
    return 0;
}

int run_exponent(const std::string& in_file) {
    std::ifstream in(in_file);
    if (!in) throw oa::UsageError("cannot open input file: " + in_file);
    std::string line;
    std::vector<std::pair<double, double>> points;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.rfind("n,", 0) == 0) {
            first = false;
            continue;  // optional header
        }
        first = false;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw oa::UsageError("exponent: expected 'n,stddev' rows, got '" + line + "'");
        try {
            points.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception&) {
            throw oa::UsageError("exponent: bad numeric row '" + line + "'");
        }
    }
    oa::ExponentFit fit;
    try {
        fit = oa::loglog_fit(points);
    } catch (const std::invalid_argument& e) {
        throw oa::UsageError(std::string("exponent: ") + e.what());
    }
    std::cout << "slope=" << fmt_num(fit.slope) << " stderr=" << fmt_num(fit.slope_stderr)
              << " intercept=" << fmt_num(fit.intercept) << " r2=" << fmt_num(fit.r2)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gapped-alignment score fluctuation toolkit"};
    app.require_subcommand(1);

    // decompose
    auto* dec = app.add_subcommand("decompose", "basis coefficients of a scoring matrix");
    std::string dec_matrix;
    dec->add_option("--matrix", dec_matrix, "scoring-matrix file")->required();

    // align
    auto* al = app.add_subcommand("align", "optimal alignment score");
    std::string al_x, al_xf, al_y, al_yf, al_matrix;
    bool al_product = false, al_witness = false;
    long al_k = 0;
    al->add_option("--x", al_x, "first sequence, inline");
    al->add_option("--x-file", al_xf, "first sequence, from file");
    al->add_option("--y", al_y, "second sequence, inline");
    al->add_option("--y-file", al_yf, "second sequence, from file");
    al->add_option("--matrix", al_matrix, "scoring-matrix file");
    al->add_flag("--product", al_product, "product scoring (requires --k)");
    auto* al_k_opt = al->add_option("--k", al_k, "exact gap count (constrained mode)");
    al->add_flag("--witness", al_witness, "also print the optimal gap positions");

    // walks
    auto* wk = app.add_subcommand("walks", "sampled walk increments or block covariances");
    long wk_n = 0, wk_k = 0, wk_block = 0;
    double wk_pa = 0.5;
    bool wk_normal = false, wk_cov = false;
    std::uint64_t wk_seed = 0;
    std::string wk_out;
    wk->add_option("--n", wk_n, "steps")->required();
    wk->add_option("--k", wk_k, "gap count (k+1 walks)")->required();
    wk->add_option("--pa", wk_pa, "P(letter a)");
    wk->add_flag("--normal-y", wk_normal, "standard-normal Y letters");
    wk->add_flag("--covariances", wk_cov, "emit per-block increment covariances");
    wk->add_option("--block", wk_block, "block length for --covariances");
    wk->add_option("--seed", wk_seed, "seed")->required();
    wk->add_option("--out", wk_out, "write CSV here instead of stdout");

    // brownian
    auto* br = app.add_subcommand("brownian", "Brownian last-passage functional samples");
    long br_k = 0, br_grid = 0, br_trials = 1;
    std::uint64_t br_seed = 0;
    std::string br_out;
    br->add_option("--k", br_k, "component count minus one")->required();
    br->add_option("--grid", br_grid, "time grid (default: policy)");
    br->add_option("--trials", br_trials, "trials");
    br->add_option("--seed", br_seed, "seed")->required();
    br->add_option("--out", br_out, "write CSV here instead of stdout");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo score experiment");
    CommonExperimentArgs sim_args;
    add_experiment_flags(sim, sim_args);

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "coupling-event pass rates");
    CommonExperimentArgs diag_args;
    add_experiment_flags(diag, diag_args);
    double diag_beta = 0.5;
    diag->add_option("--beta", diag_beta, "mesh exponent, j = floor(n^beta)")->required();

    // exponent
    auto* exp = app.add_subcommand("exponent", "log-log slope of an n,stddev table");
    std::string exp_in;
    exp->add_option("--in", exp_in, "CSV with n,stddev rows")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (dec->parsed()) return run_decompose(dec_matrix);
        if (al->parsed())
            return run_align(al_x, al_xf, al_y, al_yf, al_matrix, al_product, al_k,
                             al_k_opt->count() > 0, al_witness);
        if (wk->parsed())
            return run_walks(wk_n, wk_k, wk_pa, wk_normal, wk_seed, wk_cov, wk_block, wk_out);
        if (br->parsed()) return run_brownian(br_k, br_grid, br_trials, br_seed, br_out);
        if (sim->parsed()) return run_simulate(sim_args);
        if (diag->parsed()) return run_diagnose(diag_args, diag_beta);
        if (exp->parsed()) return run_exponent(exp_in);
    } catch (const oa::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const oa::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const oa::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
