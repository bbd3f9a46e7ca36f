// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: l1path_acceptance [path-to-l1path-cli]
// Without the CLI path, criterion 9 checks the library only.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "l1path/conditions.hpp"
#include "l1path/ensemble.hpp"
#include "l1path/homotopy.hpp"
#include "l1path/tv.hpp"
#include "support.hpp"

using namespace l1path;
using l1path::testing::Rng;

namespace {

struct Outcome
{
    bool pass = true;
    std::string detail;
};

std::string cli_path;

Outcome schur_preservation()
{
    Rng rng(1001);
    long subsets = 0, violations = 0;
    for (int t = 0; t < 200; ++t) {
        const Index n = 1 + t % 8;
        const MatrixXd H = testing::random_dd_symmetric(rng, n);
        for (unsigned long long mask = 1; mask < (1ULL << n); ++mask) {
            const IndexSet S = IndexSet::from_mask(mask, n);
            const MatrixXd R = inverse_of_submatrix_inverse(H, S);
            ++subsets;
            if (!is_diagonally_dominant(classify_dominance(R, 1e-10)))
                ++violations;
        }
    }
    return {violations == 0, std::to_string(subsets) + " subsets, " + std::to_string(violations) +
                                 " violations"};
}

Outcome dd_paths_monotone()
{
    Rng rng(1002);
    long removes = 0, magnitude = 0, breakpoints = 0;
    for (int t = 0; t < 200; ++t) {
        const Index n = 1 + t % 8;
        const MatrixXd H = testing::random_dd_symmetric(rng, n, t % 3 == 0 ? 0.0 : 0.4);
        const LassoProblem p(design_from_gram_inverse(H), testing::gaussian_vector(rng, n));
        const auto path = solve_path(p);
        breakpoints += static_cast<long>(path.breakpoints.size());
        for (const auto& b : path.breakpoints)
            removes += static_cast<long>(b.event.removed.size());
        if (!monotonicity_audit(path).magnitude_monotone)
            ++magnitude;
    }
    return {removes == 0 && magnitude == 0,
            std::to_string(breakpoints) + " breakpoints, " + std::to_string(removes) +
                " removals, " + std::to_string(magnitude) + " magnitude failures"};
}

Outcome oracle_equivalence()
{
    Rng rng(1003);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        const Index n = 1 + t % 7;
        const Index m = n + t % 5;
        const LassoProblem p(testing::gaussian_matrix(rng, m, n), testing::gaussian_vector(rng, m));
        const auto path = solve_path(p);
        for (int g = 1; g <= 30; ++g) {
            const double lambda = p.lambda_max() * g / 31.0;
            const VectorXd diff = eval_path(path, lambda) - oracle_solve(p, lambda);
            worst = std::max(worst, diff.lpNorm<Eigen::Infinity>());
        }
    }
    std::ostringstream d;
    d << "max deviation " << worst;
    return {worst <= 1e-7, d.str()};
}

Outcome coherence_implies_dd()
{
    Rng rng(1004);
    long violations = 0, on_boundary = 0;
    for (int t = 0; t < 1000; ++t) {
        const Index n = 3 + t % 6;
        const double bound = 1.0 / static_cast<double>(2 * n - 3);
        MatrixXd G = MatrixXd::Zero(n, n);
        const bool edge = t % 4 == 0;
        for (Index i = 0; i < n; ++i)
            G(i, i) = edge ? 1.0 : testing::uniform(rng, 0.1, 10.0);
        for (Index i = 0; i < n; ++i) {
            for (Index j = i + 1; j < n; ++j) {
                const double cap = std::min(G(i, i), G(j, j)) * bound;
                const double v = edge ? (testing::uniform(rng, 0, 1) < 0.5 ? cap : -cap)
                                      : testing::uniform(rng, -cap, cap);
                G(i, j) = G(j, i) = v;
            }
        }
        if (!check_coherence_bound(G).holds)
            return {false, "generator produced a matrix outside the bound"};
        on_boundary += edge ? 1 : 0;
        if (!is_diagonally_dominant(classify_dominance(invert_spd(G), 1e-10)))
            ++violations;
    }
    return {violations == 0, "1000 matrices (" + std::to_string(on_boundary) + " on the boundary), " +
                                 std::to_string(violations) + " violations"};
}

Outcome positive_cone_equivalence()
{
    Rng rng(1005);
    int agree = 0, sdd = 0, boundary = 0, not_dd = 0;
    for (int t = 0; t < 200; ++t) {
        const Index n = 1 + t % 6;
        MatrixXd H;
        switch (t % 3) {
        case 0: H = testing::random_dd_symmetric(rng, n, 0.0); break;
        case 1: H = testing::random_dd_symmetric(rng, n, 0.6); break;
        default: H = testing::random_spd(rng, n); break;
        }
        switch (classify_dominance(H)) {
        case Dominance::SDD: ++sdd; break;
        case Dominance::NotDD: ++not_dd; break;
        default: ++boundary; break;
        }
        if (verify_positive_cone_equivalence(H))
            ++agree;
    }
    return {agree == 200, std::to_string(agree) + "/200 agree (SDD " + std::to_string(sdd) +
                              ", boundary " + std::to_string(boundary) + ", NotDD " +
                              std::to_string(not_dd) + ")"};
}

Outcome tv_reduction()
{
    for (Index n = 2; n <= 12; ++n) {
        const auto r = tv::check_dd_analysis(tv::first_difference_matrix(n));
        const Dominance expected = n <= 3 ? Dominance::SDD : Dominance::IDD;
        if (!r.holds || r.dominance != expected)
            return {false, "first difference n=" + std::to_string(n) + " misclassified"};
    }
    Rng rng(1006);
    long removes = 0;
    for (int t = 0; t < 100; ++t) {
        const Index n = 2 + t % 11;
        const tv::TVProblem prob(testing::gaussian_vector(rng, n), tv::first_difference_matrix(n));
        for (const auto& b : tv::solve_tv_path(prob).lasso_path.breakpoints)
            removes += static_cast<long>(b.event.removed.size());
    }
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        const Index n = 2 + t % 11;
        const tv::TVProblem prob(testing::gaussian_vector(rng, n), tv::first_difference_matrix(n));
        const VectorXd u = testing::gaussian_vector(rng, n - 1);
        const double lambda = testing::uniform(rng, 0, 2);
        const double lhs = tv::tv_objective(prob, tv::recover_x(prob, u), lambda);
        const double rhs = tv::reformulate(prob).objective(u, lambda);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    std::ostringstream d;
    d << "n=2..12 DD, " << removes << " removals in 100 paths, objective gap " << worst;
    return {removes == 0 && worst <= 1e-9, d.str()};
}

Outcome interpolation()
{
    Rng rng(1007);
    double worst = 0;
    long points = 0;
    for (int t = 0; t < 50; ++t) {
        const Index n = 2 + t % 7;
        const Index m = n + t % 4;
        const LassoProblem p(testing::gaussian_matrix(rng, m, n), testing::gaussian_vector(rng, m));
        const auto path = solve_path(p);
        for (std::size_t k = 0; k + 1 < path.breakpoints.size(); ++k) {
            const auto& a = path.breakpoints[k];
            const double lo = path.breakpoints[k + 1].lambda;
            for (int s = 0; s < 20; ++s) {
                const double lambda = lo + (a.lambda - lo) * testing::uniform(rng, 0.01, 0.99);
                const VectorXd direct = fixed_support_solve(p, lambda, a.active, a.signs);
                const double scale = std::max(1.0, direct.lpNorm<Eigen::Infinity>());
                worst = std::max(worst,
                                 (eval_path(path, lambda) - direct).lpNorm<Eigen::Infinity>() / scale);
                ++points;
            }
        }
    }
    std::ostringstream d;
    d << points << " points, max deviation " << worst;
    return {worst <= 1e-9, d.str()};
}

MatrixXd equiangular_dictionary(Index n, double mu)
{
    MatrixXd G = MatrixXd::Constant(n, n, mu);
    G.diagonal().setOnes();
    return design_from_gram_inverse(invert_spd(G));
}

Outcome donoho_arithmetic()
{
    // mu = 1: two identical unit columns next to an orthogonal one.
    MatrixXd twins(3, 3);
    twins << 1, 1, 0, 0, 0, 1, 0, 0, 0;
    struct Case
    {
        MatrixXd A;
        long boundary;
    };
    const Case cases[] = {{twins, 1},
                          {equiangular_dictionary(3, 1.0 / 3.0), 2},
                          {equiangular_dictionary(5, 1.0 / 7.0), 4}};
    for (const auto& c : cases) {
        if (!check_donoho_kstep(c.A, c.boundary).holds || check_donoho_kstep(c.A, c.boundary + 1).holds)
            return {false, "boundary k=" + std::to_string(c.boundary) + " not reproduced"};
    }
    // Exact integer form of k = n - 1 against mu = p/q: 2k - 1 <= q/p  <=>  p (2n - 3) <= q.
    for (long n = 3; n <= 10; ++n) {
        for (long q = 1; q <= 60; ++q) {
            for (long p = 1; p <= q; ++p) {
                const bool kstep = p * (2 * (n - 1) - 1) <= q;
                const bool coherence = p * (2 * n - 3) <= q;
                const bool k_next = p * (2 * n - 1) <= q;
                if (kstep != coherence || (k_next && !kstep))
                    return {false, "rational check failed at n=" + std::to_string(n)};
            }
        }
        const double mu = 1.0 / static_cast<double>(2 * n - 3);
        const MatrixXd A = equiangular_dictionary(n, mu);
        MatrixXd G = MatrixXd::Constant(n, n, mu);
        G.diagonal().setOnes();
        if (!check_donoho_kstep(A, n - 1).holds || check_donoho_kstep(A, n).holds ||
            !check_coherence_bound(G).holds ||
            check_donoho_kstep(equiangular_dictionary(n, mu * 1.01), n - 1).holds)
            return {false, "limiting case failed numerically at n=" + std::to_string(n)};
    }
    return {true, "mu in {1, 1/3, 1/7} give k = 1, 2, 4; limiting case n=3..10"};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome ensemble_reproducibility()
{
    using namespace ensemble;
    EnsembleSpec spec;
    spec.m = 20;
    spec.n = 3;
    spec.trials = 1000;
    spec.seed = 7;
    const auto serial = run_frequency_study(spec);
    for (unsigned w : {2u, 4u, 7u}) {
        StudyOptions opts;
        opts.workers = w;
        if (!(run_frequency_study(spec, opts) == serial))
            return {false, "library result depends on worker count"};
    }
    EnsembleSpec sparse = spec;
    sparse.distribution = Distribution::Bernoulli;
    sparse.p = 0.1;
    sparse.m = 10;
    sparse.n = 8;
    const auto b = run_frequency_study(sparse);
    if (b.singular_count == 0 || b.dd_count + b.not_dd_count + b.singular_count != sparse.trials)
        return {false, "Bernoulli(0.1) singular trials not reported"};

    std::string detail = "normal 20x3 frequency " + std::to_string(serial.frequency()) +
                         ", Bernoulli(0.1) 10x8 singular " + std::to_string(b.singular_count);
    if (cli_path.empty())
        return {true, detail + " (CLI not given)"};

    const auto dir = std::filesystem::temp_directory_path() / "l1path_acceptance";
    std::filesystem::create_directories(dir);
    auto run = [&](const std::string& args, const std::string& name) {
        const auto out = dir / name;
        const std::string cmd = "\"" + cli_path + "\" mc " + args + " --out \"" + out.string() + "\"";
        if (std::system(cmd.c_str()) != 0)
            return std::string();
        return slurp(out);
    };
    const std::string base = "--dist normal --m 20 --n 3 --trials 1000 --seed 7";
    const std::string first = run(base, "a.csv");
    const std::string second = run(base, "b.csv");
    const std::string threaded = run(base + " --workers 4", "c.csv");
    const std::string sweep1 = run("--sweep --n-max 4 --trials 200 --seed 3", "d.csv");
    const std::string sweep4 = run("--sweep --n-max 4 --trials 200 --seed 3 --workers 4", "e.csv");
    std::filesystem::remove_all(dir);
    if (first.empty() || first != second || first != threaded)
        return {false, "CLI mc output differs between runs or worker counts"};
    if (sweep1.empty() || sweep1 != sweep4)
        return {false, "CLI mc sweep differs between worker counts"};
    if (sweep1.find("bernoulli,0.1,") == std::string::npos)
        return {false, "CLI sweep lacks Bernoulli(0.1) rows"};
    return {true, detail + ", CLI byte-identical"};
}

} // namespace

int main(int argc, char** argv)
{
    if (argc > 1)
        cli_path = argv[1];

    struct Criterion
    {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "Schur reduction preserves diagonal dominance", 60, schur_preservation},
        {2, "DD Gram inverse: no removals, magnitudes monotone", 60, dd_paths_monotone},
        {3, "path matches brute-force oracle", 120, oracle_equivalence},
        {4, "coherence bound gives DD inverse", 60, coherence_implies_dd},
        {5, "positive cone for every (S, B) iff SDD", 60, positive_cone_equivalence},
        {6, "total variation reduction", 60, tv_reduction},
        {7, "segment interpolation equals fixed-support solve", 60, interpolation},
        {8, "k-step coherence bound arithmetic", 60, donoho_arithmetic},
        {9, "Monte Carlo reproducibility", 60, ensemble_reproducibility},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_seconds) {
            o.pass = false;
            o.detail += "; exceeded time limit";
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %d: %s - %s: %s (%.2fs)\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs);
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
