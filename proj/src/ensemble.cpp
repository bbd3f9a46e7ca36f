#include "l1path/ensemble.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <thread>

#include "l1path/io.hpp"

namespace l1path::ensemble {

std::string_view to_string(Distribution d)
{
    switch (d) {
    case Distribution::Normal: return "normal";
    case Distribution::Uniform01: return "uniform";
    case Distribution::Bernoulli: return "bernoulli";
    }
    return "?";
}

Distribution parse_distribution(std::string_view name)
{
    if (name == "normal")
        return Distribution::Normal;
    if (name == "uniform" || name == "uniform01")
        return Distribution::Uniform01;
    if (name == "bernoulli")
        return Distribution::Bernoulli;
    throw ArgumentError("unknown distribution '" + std::string(name) + "'");
}

void EnsembleSpec::validate() const
{
    if (m < 1 || n < 1)
        throw ArgumentError("ensemble: m and n must be positive");
    if (trials < 1)
        throw ArgumentError("ensemble: trials must be >= 1");
    if (distribution == Distribution::Bernoulli && !(p > 0 && p < 1))
        throw ArgumentError("ensemble: Bernoulli p must lie in (0, 1)");
}

MatrixXd sample_matrix(const EnsembleSpec& spec, std::size_t trial_index)
{
    const auto t = static_cast<std::uint64_t>(trial_index);
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(seq);

    MatrixXd A(spec.m, spec.n);
    switch (spec.distribution) {
    case Distribution::Normal: {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (Index j = 0; j < A.cols(); ++j)
            for (Index i = 0; i < A.rows(); ++i)
                A(i, j) = dist(rng);
        break;
    }
    case Distribution::Uniform01: {
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (Index j = 0; j < A.cols(); ++j)
            for (Index i = 0; i < A.rows(); ++i)
                A(i, j) = dist(rng);
        break;
    }
    case Distribution::Bernoulli: {
        std::bernoulli_distribution dist(spec.p);
        for (Index j = 0; j < A.cols(); ++j)
            for (Index i = 0; i < A.rows(); ++i)
                A(i, j) = dist(rng) ? 1.0 : 0.0;
        break;
    }
    }
    return A;
}

TrialOutcome classify_trial(const MatrixXd& A)
{
    MatrixXd H;
    try {
        H = invert_spd(gram(A));
    } catch (const SingularityError&) {
        return TrialOutcome::Singular;
    }
    return is_diagonally_dominant(classify_dominance(H)) ? TrialOutcome::DD : TrialOutcome::NotDD;
}

FrequencyReport run_frequency_study(const EnsembleSpec& spec, const StudyOptions& opts)
{
    spec.validate();
    if (spec.m < spec.n && !opts.allow_underdetermined)
        throw HypothesisError("ensemble: m=" + std::to_string(spec.m) + " < n=" +
                              std::to_string(spec.n) + "; rows >= cols is required");

    const Sampler sampler = opts.sampler ? opts.sampler : Sampler(sample_matrix);
    std::vector<TrialOutcome> outcomes(spec.trials);

    const unsigned workers =
        std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(spec.trials)));
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t)
            outcomes[t] = classify_trial(sampler(spec, t));
    };
    if (workers == 1) {
        run_range(0, spec.trials);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (spec.trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(spec.trials, begin + chunk);
            if (begin < end)
                pool.emplace_back(run_range, begin, end);
        }
    }

    FrequencyReport report;
    report.spec = spec;
    report.underdetermined = spec.m < spec.n;
    for (auto o : outcomes) {
        switch (o) {
        case TrialOutcome::DD: ++report.dd_count; break;
        case TrialOutcome::NotDD: ++report.not_dd_count; break;
        case TrialOutcome::Singular: ++report.singular_count; break;
        }
    }
    return report;
}

std::vector<std::pair<Distribution, double>> study_distributions()
{
    return {{Distribution::Normal, 0.0},
            {Distribution::Uniform01, 0.0},
            {Distribution::Bernoulli, 0.1},
            {Distribution::Bernoulli, 0.5}};
}

std::vector<EnsembleSpec> default_sweep(std::size_t trials, std::uint64_t seed, Index n_lo,
                                        Index n_hi)
{
    std::vector<EnsembleSpec> specs;
    for (auto [dist, p] : study_distributions()) {
        for (Index n = n_lo; n <= n_hi; ++n) {
            for (Index factor : {1, 2, 4}) {
                EnsembleSpec s;
                s.distribution = dist;
                s.p = dist == Distribution::Bernoulli ? p : 0.5;
                s.m = factor * n;
                s.n = n;
                s.trials = trials;
                s.seed = seed;
                specs.push_back(s);
            }
        }
    }
    return specs;
}

void write_csv_header(std::ostream& out)
{
    out << "distribution,p,m,n,trials,dd,singular,frequency\n";
}

void write_csv_row(std::ostream& out, const FrequencyReport& r)
{
    const auto& s = r.spec;
    out << to_string(s.distribution) << ','
        << (s.distribution == Distribution::Bernoulli ? io::format_double(s.p) : "") << ','
        << s.m << ',' << s.n << ',' << s.trials << ',' << r.dd_count << ',' << r.singular_count
        << ',' << io::format_double(r.frequency()) << '\n';
}

} // namespace l1path::ensemble
