// l1path: solution paths of l1-penalized least squares and certificates for
// monotone growth of the active set.
//
// Exit codes: 0 all requested conditions hold / audit passed,
//             1 a condition fails / audit failed,
//             2 usage, parse or numerical error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "l1path/conditions.hpp"
#include "l1path/ensemble.hpp"
#include "l1path/homotopy.hpp"
#include "l1path/io.hpp"
#include "l1path/tv.hpp"

namespace {

using namespace l1path;

constexpr int kOk = 0;
constexpr int kFail = 1;

/// stdout unless a path was given.
class Output
{
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw Error("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    bool to_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
};

void print_report(const ConditionReport& r, bool json)
{
    if (json)
        std::cout << to_json(r) << '\n';
    else
        std::cout << to_key_value(r) << '\n';
}

// ---------------------------------------------------------------------------

struct CheckArgs
{
    std::string matrix;
    std::optional<long> donoho_k;
    bool coherence = false;
    bool positive_cone = false;
    bool exhaustive = false;
    long max_n = 10;
    double slack = 0.0;
    bool allow_underdetermined = false;
    bool skip_dd = false;
    bool json = false;
};

int cmd_check(const CheckArgs& args)
{
    const MatrixXd A = io::read_matrix_file(args.matrix);
    std::vector<ConditionReport> reports;
    if (!args.skip_dd) {
        DdGramInverseOptions opts;
        opts.slack = args.slack;
        opts.allow_underdetermined = args.allow_underdetermined;
        reports.push_back(check_dd_gram_inverse(A, opts));
    }
    if (args.donoho_k)
        reports.push_back(check_donoho_kstep(A, *args.donoho_k));
    if (args.coherence)
        reports.push_back(check_coherence_bound(gram(A)));
    if (args.positive_cone) {
        PositiveConeOptions opts;
        opts.exhaustive = args.exhaustive;
        opts.max_n = args.max_n;
        reports.push_back(check_positive_cone(A, opts));
    }
    bool all = true;
    for (const auto& r : reports) {
        print_report(r, args.json);
        all = all && r.holds;
    }
    return all ? kOk : kFail;
}

// ---------------------------------------------------------------------------

struct PathArgs
{
    std::string matrix;
    std::string rhs;
    double lambda_min = 0.0;
    std::optional<std::size_t> max_breakpoints;
    bool audit = false;
    std::string out;
};

int cmd_path(const PathArgs& args)
{
    MatrixXd A = io::read_matrix_file(args.matrix);
    VectorXd y = io::read_vector_file(args.rhs);
    const LassoProblem problem(std::move(A), std::move(y));

    PathOptions opts;
    opts.lambda_min = args.lambda_min;
    opts.max_breakpoints = args.max_breakpoints;
    const SolutionPath path = solve_path(problem, opts);

    Output out(args.out);
    write_path_csv(out.stream(), path.breakpoints);
    out.stream().flush();

    if (args.audit) {
        if (!out.to_file())
            std::cout << '\n';
        const AuditReport audit = monotonicity_audit(path);
        std::cout << "cardinality_monotone=" << (audit.cardinality_monotone ? "true" : "false")
                  << '\n';
        std::cout << "magnitude_monotone=" << (audit.magnitude_monotone ? "true" : "false")
                  << '\n';
        for (const auto& f : audit.failures)
            std::cout << "failure=" << f << '\n';
        std::cout << "\nlambda,l1_norm,residual_sq\n";
        for (const auto& pt : pareto_points(path))
            std::cout << io::format_double(pt.lambda) << ',' << io::format_double(pt.l1_norm)
                      << ',' << io::format_double(pt.residual_sq) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct TvArgs
{
    std::string rhs;
    std::string analysis;
    double lambda_min = 0.0;
    std::string out;
};

int cmd_tv(const TvArgs& args)
{
    VectorXd y = io::read_vector_file(args.rhs);
    MatrixXd D = args.analysis.empty() ? tv::first_difference_matrix(y.size())
                                       : io::read_matrix_file(args.analysis);
    const tv::TVProblem problem(std::move(y), std::move(D));

    PathOptions opts;
    opts.lambda_min = args.lambda_min;
    const tv::TVPath path = tv::solve_tv_path(problem, opts);

    Output out(args.out);
    tv::write_tv_csv(out.stream(), path);

    if (out.to_file()) {
        const AuditReport audit = monotonicity_audit(path.lasso_path);
        std::cout << to_key_value(tv::check_dd_analysis(problem.D()));
        std::cout << "breakpoints=" << path.lasso_path.breakpoints.size() << '\n';
        std::cout << "cardinality_monotone_Dx=" << (audit.cardinality_monotone ? "true" : "false")
                  << '\n';
        const VectorXd& u_end = path.lasso_path.breakpoints.back().u;
        std::cout << "jumps_at_end=" << tv::cardinality(u_end, 1e-9 * (1 + u_end.norm())) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct McArgs
{
    std::string dist = "normal";
    double p = 0.5;
    long m = 0;
    long n = 0;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    bool sweep = false;
    long n_max = 10;
    bool allow_underdetermined = false;
    std::string out;
};

int cmd_mc(const McArgs& args)
{
    std::vector<ensemble::EnsembleSpec> specs;
    if (args.sweep) {
        specs = ensemble::default_sweep(args.trials, args.seed, 2, args.n_max);
    } else {
        ensemble::EnsembleSpec s;
        s.distribution = ensemble::parse_distribution(args.dist);
        s.p = args.p;
        s.m = args.m;
        s.n = args.n;
        s.trials = args.trials;
        s.seed = args.seed;
        specs.push_back(s);
    }
    for (const auto& s : specs) {
        s.validate();
        if (s.m < s.n && !args.allow_underdetermined)
            throw HypothesisError("ensemble: m=" + std::to_string(s.m) + " < n=" +
                                  std::to_string(s.n) + "; rows >= cols is required");
    }

    ensemble::StudyOptions opts;
    opts.workers = args.workers;
    opts.allow_underdetermined = args.allow_underdetermined;

    Output out(args.out);
    ensemble::write_csv_header(out.stream());
    for (const auto& s : specs) {
        const auto report = ensemble::run_frequency_study(s, opts);
        if (report.underdetermined)
            std::cerr << "warning: m < n for " << ensemble::to_string(s.distribution) << " m="
                      << s.m << " n=" << s.n << "; A^T A is singular\n";
        ensemble::write_csv_row(out.stream(), report);
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct AuditArgs
{
    std::string path_csv;
    std::string matrix;
    std::string rhs;
    double tol = 1e-8;
    bool require_monotone = false;
};

int cmd_audit(const AuditArgs& args)
{
    std::ifstream in(args.path_csv);
    if (!in)
        throw Error("cannot open " + args.path_csv);
    std::optional<LassoProblem> problem;
    if (!args.matrix.empty() || !args.rhs.empty()) {
        if (args.matrix.empty() || args.rhs.empty())
            throw ArgumentError("audit: --A and --y must be given together");
        problem.emplace(io::read_matrix_file(args.matrix), io::read_vector_file(args.rhs));
    }
    const auto bps = read_path_csv(in);

    bool ok = true;
    if (problem) {
        if (bps.front().u.size() != problem->cols())
            throw DimensionError("audit: path has " + std::to_string(bps.front().u.size()) +
                                 " coefficients but A has " + std::to_string(problem->cols()) +
                                 " columns");
        for (std::size_t k = 0; k < bps.size(); ++k) {
            const auto& b = bps[k];
            const bool kkt = b.lambda > 0 ? subgradient_check(*problem, b.lambda, b.u, args.tol)
                                          : least_squares_check(*problem, b.u, args.tol);
            if (!kkt) {
                ok = false;
                std::cout << "kkt_failure=breakpoint " << k
                          << " (lambda=" << io::format_double(b.lambda) << ")\n";
            }
        }
        std::cout << "kkt=" << (ok ? "pass" : "fail") << '\n';
    }

    const AuditReport audit = monotonicity_audit(bps);
    std::cout << "cardinality_monotone=" << (audit.cardinality_monotone ? "true" : "false") << '\n';
    std::cout << "magnitude_monotone=" << (audit.magnitude_monotone ? "true" : "false") << '\n';
    for (const auto& f : audit.failures)
        std::cout << "failure=" << f << '\n';
    if (args.require_monotone && !audit.passed())
        ok = false;
    return ok ? kOk : kFail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Solution paths of l1-penalized least squares and monotonicity certificates"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("check", "certify monotone active-set growth for A");
    check_cmd->add_option("matrix", check.matrix, "matrix file for A")->required()->check(CLI::ExistingFile);
    check_cmd->add_option("--donoho-k", check.donoho_k, "also test k <= (1 + 1/mu)/2");
    check_cmd->add_flag("--coherence", check.coherence, "also test |g_ij|/g_ii <= 1/(2n-3) on A^T A");
    check_cmd->add_flag("--positive-cone", check.positive_cone, "also test the positive cone condition");
    check_cmd->add_flag("--exhaustive", check.exhaustive, "positive cone: enumerate every (S, B)");
    check_cmd->add_option("--max-n", check.max_n, "positive cone: column limit")->capture_default_str();
    check_cmd->add_option("--slack", check.slack, "dominance slack epsilon")->capture_default_str();
    check_cmd->add_flag("--allow-underdetermined", check.allow_underdetermined, "accept rows < cols");
    check_cmd->add_flag("--skip-dd", check.skip_dd, "do not test (A^T A)^-1 dominance");
    check_cmd->add_flag("--json", check.json, "one JSON object per report");

    PathArgs path;
    auto* path_cmd = app.add_subcommand("path", "homotopy solution path as CSV");
    path_cmd->add_option("matrix", path.matrix, "matrix file for A")->required()->check(CLI::ExistingFile);
    path_cmd->add_option("y", path.rhs, "vector file for y")->required()->check(CLI::ExistingFile);
    path_cmd->add_option("--lambda-min", path.lambda_min, "stop at this lambda")->capture_default_str();
    path_cmd->add_option("--max-breakpoints", path.max_breakpoints, "breakpoint budget (default 10n+10)");
    path_cmd->add_flag("--audit", path.audit, "print monotonicity audit and Pareto pairs");
    path_cmd->add_option("--out", path.out, "CSV output file (default stdout)");

    TvArgs tvargs;
    auto* tv_cmd = app.add_subcommand("tv", "total variation solution path as CSV");
    tv_cmd->add_option("y", tvargs.rhs, "vector file for y")->required()->check(CLI::ExistingFile);
    tv_cmd->add_option("--D", tvargs.analysis, "analysis operator (default first difference)")
        ->check(CLI::ExistingFile);
    tv_cmd->add_option("--lambda-min", tvargs.lambda_min, "stop at this lambda")->capture_default_str();
    tv_cmd->add_option("--out", tvargs.out, "CSV output file (default stdout)");

    McArgs mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo frequency of (A^T A)^-1 being DD");
    mc_cmd->add_option("--dist", mc.dist, "normal | uniform | bernoulli")->capture_default_str();
    mc_cmd->add_option("--p", mc.p, "Bernoulli probability of 1")->capture_default_str();
    mc_cmd->add_option("--m", mc.m, "rows");
    mc_cmd->add_option("--n", mc.n, "columns");
    mc_cmd->add_option("--trials", mc.trials, "trials per configuration")->capture_default_str();
    mc_cmd->add_option("--seed", mc.seed, "base seed")->capture_default_str();
    mc_cmd->add_option("--workers", mc.workers, "worker threads")->capture_default_str();
    mc_cmd->add_flag("--sweep", mc.sweep, "all four distributions, n in [2, n-max], m in {n, 2n, 4n}");
    mc_cmd->add_option("--n-max", mc.n_max, "largest n of the sweep")->capture_default_str();
    mc_cmd->add_flag("--allow-underdetermined", mc.allow_underdetermined, "accept m < n");
    mc_cmd->add_option("--out", mc.out, "CSV output file (default stdout)");

    AuditArgs audit;
    auto* audit_cmd = app.add_subcommand("audit", "re-verify a path CSV");
    audit_cmd->add_option("path", audit.path_csv, "path CSV")->required()->check(CLI::ExistingFile);
    audit_cmd->add_option("--A", audit.matrix, "matrix file (enables the KKT check)")
        ->check(CLI::ExistingFile);
    audit_cmd->add_option("--y", audit.rhs, "vector file (enables the KKT check)")
        ->check(CLI::ExistingFile);
    audit_cmd->add_option("--tol", audit.tol, "KKT tolerance")->capture_default_str();
    audit_cmd->add_flag("--require-monotone", audit.require_monotone,
                        "fail when the monotonicity audit fails");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*check_cmd)
            return cmd_check(check);
        if (*path_cmd)
            return cmd_path(path);
        if (*tv_cmd)
            return cmd_tv(tvargs);
        if (*mc_cmd) {
            if (!mc.sweep && (mc.m < 1 || mc.n < 1))
                throw ArgumentError("mc: --m and --n are required unless --sweep is given");
            return cmd_mc(mc);
        }
        if (*audit_cmd)
            return cmd_audit(audit);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
