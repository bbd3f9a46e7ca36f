#pragma once

// Monte Carlo estimate of how often (A^T A)^{-1} is diagonally dominant for
// random A with i.i.d. entries.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l1path/matrix.hpp"

namespace l1path::ensemble {

enum class Distribution { Normal, Uniform01, Bernoulli };

std::string_view to_string(Distribution d);
/// Accepts "normal", "uniform", "uniform01", "bernoulli".
Distribution parse_distribution(std::string_view name);

struct EnsembleSpec
{
    Distribution distribution = Distribution::Normal;
    double p = 0.5; ///< Bernoulli success probability, in (0, 1)
    Index m = 0;
    Index n = 0;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;

    /// Throws ArgumentError on invalid counts or p.
    void validate() const;

    friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

struct FrequencyReport
{
    EnsembleSpec spec;
    std::size_t dd_count = 0;
    std::size_t not_dd_count = 0;
    std::size_t singular_count = 0;
    bool underdetermined = false; ///< m < n run under override

    double frequency() const
    {
        return static_cast<double>(dd_count) / static_cast<double>(spec.trials);
    }

    friend bool operator==(const FrequencyReport&, const FrequencyReport&) = default;
};

/// Matrix for trial `trial_index`. The random stream is derived from
/// (seed, trial_index) only, so any trial can be regenerated in isolation.
MatrixXd sample_matrix(const EnsembleSpec& spec, std::size_t trial_index);

using Sampler = std::function<MatrixXd(const EnsembleSpec&, std::size_t)>;

struct StudyOptions
{
    unsigned workers = 1;
    bool allow_underdetermined = false;
    /// Replaces sample_matrix, e.g. to feed structured matrices in tests.
    Sampler sampler;
};

/// Outcome of one trial.
enum class TrialOutcome { DD, NotDD, Singular };
TrialOutcome classify_trial(const MatrixXd& A);

/// Counts DD-or-stronger (A^T A)^{-1} over spec.trials matrices. Singular
/// Gram matrices are counted separately. Results do not depend on workers.
FrequencyReport run_frequency_study(const EnsembleSpec& spec, const StudyOptions& opts = {});

/// The default sweep: the given distributions for n in [n_lo, n_hi] and
/// m in {n, 2n, 4n}.
std::vector<EnsembleSpec> default_sweep(std::size_t trials, std::uint64_t seed, Index n_lo = 2,
                                        Index n_hi = 10);

/// normal, uniform, bernoulli(0.1), bernoulli(0.5)
std::vector<std::pair<Distribution, double>> study_distributions();

/// `distribution,p,m,n,trials,dd,singular,frequency`; p is empty unless Bernoulli.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const FrequencyReport& report);

} // namespace l1path::ensemble
