#pragma once

// Certificates for monotone growth of the lasso active set.
//
//  * check_dd_gram_inverse           (A^T A)^{-1} is diagonally dominant
//  * check_donoho_kstep       k <= (1 + 1/mu) / 2
//  * check_coherence_bound    |g_ij| / g_ii <= 1 / (2n - 3) for every row
//  * check_positive_cone      every signed principal minor of A^T A has an
//                             inverse with strictly positive row sums

#include <optional>
#include <string>

#include "l1path/matrix.hpp"

namespace l1path {

struct ConditionReport
{
    std::string condition;
    bool holds = false;
    std::optional<Dominance> dominance;
    std::optional<std::string> witness; ///< present whenever holds == false
    std::optional<double> mu;
    std::optional<double> k_bound;
    std::optional<double> max_ratio;
    std::optional<double> ratio_bound;
};

/// Flat `key=value` lines. condition, holds, dominance, mu, k_bound and
/// witness are always written (empty when absent); max_ratio and ratio_bound
/// only when set.
std::string to_key_value(const ConditionReport& report);
/// Single-line JSON object with the same keys (null for absent values).
std::string to_json(const ConditionReport& report);

struct DdGramInverseOptions
{
    double slack = 0.0;                ///< passed to classify_dominance
    bool allow_underdetermined = false; ///< accept rows < cols (the Gram matrix is then singular)
};

/// Holds iff (A^T A)^{-1} is DD, IDD or SDD. Throws HypothesisError when
/// rows < cols (unless overridden) and SingularityError for rank deficiency.
ConditionReport check_dd_gram_inverse(const MatrixXd& A, const DdGramInverseOptions& opts = {});

struct DonohoOptions
{
    /// Relative tolerance on mu * (2k - 1) <= 1 so that dictionaries built to
    /// sit on the boundary are not rejected by rounding in the normalization.
    double rel_tol = 1e-12;
};

/// Holds iff k <= (1 + 1/mu) / 2. mu == 0 gives an infinite bound.
ConditionReport check_donoho_kstep(const MatrixXd& A, long k, const DonohoOptions& opts = {});

struct CoherenceOptions
{
    /// Relative tolerance on the ratio bound, for Gram matrices formed from
    /// designs that sit exactly on it.
    double rel_tol = 1e-12;
};

/// Holds iff max_{i != j} |g_ij| / g_ii <= 1 / (2n - 3). Requires n > 2,
/// g_ii > 0 and a symmetric G.
ConditionReport check_coherence_bound(const MatrixXd& G, const CoherenceOptions& opts = {});

struct PositiveConeOptions
{
    Index max_n = 10;
    /// Enumerate every (S, B) pair and invert each signed minor directly.
    /// Otherwise check that (G_S)^{-1} is SDD for every S.
    bool exhaustive = false;
    /// A row sum counts as positive when it exceeds tol * max|entry| of the
    /// inverted minor. 0 gives a bare float comparison.
    double tol = 1e-10;
};

/// Positive cone condition on A^T A. Subsets S are visited in increasing
/// bitmask order and sign patterns B (with b_first = +1, since B and -B give
/// the same signed minor) in increasing bitmask order; the first failure is
/// the witness.
ConditionReport check_positive_cone(const MatrixXd& A, const PositiveConeOptions& opts = {});

/// A symmetric positive definite with A^T A = H^{-1} (the inverse square root
/// of H). Throws SingularityError when H is not positive definite.
MatrixXd design_from_gram_inverse(const MatrixXd& H);

/// Self-test of the SDD <=> positive cone equivalence on one matrix: builds A
/// from H and compares [H is SDD] with the exhaustive positive cone verdict.
bool verify_positive_cone_equivalence(const MatrixXd& H, double tol = 1e-9);

} // namespace l1path
