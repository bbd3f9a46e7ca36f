#include "l1path/conditions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "l1path/io.hpp"

namespace l1path {

namespace {

std::string format_set(const IndexSet& S)
{
    std::string s = "{";
    for (Index k = 0; k < S.size(); ++k) {
        if (k > 0)
            s += ',';
        s += std::to_string(S[k]);
    }
    return s + "}";
}

std::string format_signs(const VectorXd& b)
{
    std::string s;
    for (Index k = 0; k < b.size(); ++k)
        s += b(k) > 0 ? '+' : '-';
    return s;
}

std::string row_witness(const MatrixXd& H, Index i)
{
    const double diag = H(i, i);
    const double off = diag - row_margin(H, i);
    return "row " + std::to_string(i) + ": h_ii=" + io::format_double(diag) +
           " < sum_{j!=i}|h_ij|=" + io::format_double(off);
}

} // namespace

std::string to_key_value(const ConditionReport& r)
{
    auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : ""; };
    std::ostringstream out;
    out << "condition=" << r.condition << '\n';
    out << "holds=" << (r.holds ? "true" : "false") << '\n';
    out << "dominance=" << (r.dominance ? std::string(to_string(*r.dominance)) : "") << '\n';
    out << "mu=" << opt(r.mu) << '\n';
    out << "k_bound=" << opt(r.k_bound) << '\n';
    out << "witness=" << r.witness.value_or("") << '\n';
    if (r.max_ratio)
        out << "max_ratio=" << opt(r.max_ratio) << '\n';
    if (r.ratio_bound)
        out << "ratio_bound=" << opt(r.ratio_bound) << '\n';
    return out.str();
}

std::string to_json(const ConditionReport& r)
{
    auto num = [](const std::optional<double>& v) -> nlohmann::json {
        if (!v)
            return nullptr;
        if (std::isinf(*v))
            return *v > 0 ? "inf" : "-inf";
        return *v;
    };
    nlohmann::ordered_json j;
    j["condition"] = r.condition;
    j["holds"] = r.holds;
    j["dominance"] = r.dominance ? nlohmann::json(std::string(to_string(*r.dominance))) : nullptr;
    j["mu"] = num(r.mu);
    j["k_bound"] = num(r.k_bound);
    j["witness"] = r.witness ? nlohmann::json(*r.witness) : nullptr;
    if (r.max_ratio)
        j["max_ratio"] = num(r.max_ratio);
    if (r.ratio_bound)
        j["ratio_bound"] = num(r.ratio_bound);
    return j.dump();
}

ConditionReport check_dd_gram_inverse(const MatrixXd& A, const DdGramInverseOptions& opts)
{
    if (A.rows() < A.cols() && !opts.allow_underdetermined)
        throw HypothesisError("check_dd_gram_inverse: A is " + std::to_string(A.rows()) + "x" +
                              std::to_string(A.cols()) + "; rows >= cols is required");
    require_finite(A, "check_dd_gram_inverse");

    MatrixXd H;
    try {
        H = invert_spd(gram(A));
    } catch (const SingularityError& e) {
        throw SingularityError(std::string("check_dd_gram_inverse: A^T A is singular (A is rank "
                                           "deficient): ") +
                               e.what());
    }

    ConditionReport report;
    report.condition = "dd_gram_inverse";
    report.dominance = classify_dominance(H, opts.slack);
    report.holds = is_diagonally_dominant(*report.dominance);
    if (!report.holds)
        report.witness = "(A^T A)^-1 " + row_witness(H, *first_non_dominant_row(H, opts.slack));
    return report;
}

ConditionReport check_donoho_kstep(const MatrixXd& A, long k, const DonohoOptions& opts)
{
    if (k < 1)
        throw ArgumentError("check_donoho_kstep: k must be >= 1");
    const double mu = mutual_coherence(A);

    ConditionReport report;
    report.condition = "donoho_kstep";
    report.mu = mu;
    if (mu == 0) {
        report.k_bound = std::numeric_limits<double>::infinity();
        report.holds = true;
        return report;
    }
    report.k_bound = 0.5 * (1.0 + 1.0 / mu);
    // k <= (1 + 1/mu)/2  <=>  mu (2k - 1) <= 1
    report.holds = mu * static_cast<double>(2 * k - 1) <= 1.0 + opts.rel_tol;
    if (!report.holds)
        report.witness = "k=" + std::to_string(k) + " exceeds (1+1/mu)/2=" +
                         io::format_double(*report.k_bound);
    return report;
}

ConditionReport check_coherence_bound(const MatrixXd& G, const CoherenceOptions& opts)
{
    require_square(G, "check_coherence_bound");
    require_finite(G, "check_coherence_bound");
    const Index n = G.rows();
    if (n <= 2)
        throw HypothesisError("check_coherence_bound: n > 2 is required, got n=" +
                              std::to_string(n));
    for (Index i = 0; i < n; ++i)
        if (!(G(i, i) > 0))
            throw HypothesisError("check_coherence_bound: diagonal entry " + std::to_string(i) +
                                  " is not positive");
    const double scale = G.cwiseAbs().maxCoeff();
    if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw HypothesisError("check_coherence_bound: G is not symmetric");

    double worst = 0;
    Index wi = 0, wj = 1;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double ratio = std::abs(G(i, j)) / G(i, i);
            if (ratio > worst) {
                worst = ratio;
                wi = i;
                wj = j;
            }
        }
    }

    ConditionReport report;
    report.condition = "coherence_bound";
    report.max_ratio = worst;
    report.ratio_bound = 1.0 / static_cast<double>(2 * n - 3);
    report.holds = worst <= *report.ratio_bound * (1.0 + opts.rel_tol);
    if (!report.holds)
        report.witness = "|g(" + std::to_string(wi) + "," + std::to_string(wj) + ")|/g(" +
                         std::to_string(wi) + "," + std::to_string(wi) + ")=" + io::format_double(worst) +
                         " > 1/(2n-3)=" + io::format_double(*report.ratio_bound);
    return report;
}

ConditionReport check_positive_cone(const MatrixXd& A, const PositiveConeOptions& opts)
{
    const Index n = A.cols();
    if (n > opts.max_n)
        throw CostGuardError("check_positive_cone: " + std::to_string(n) +
                             " columns exceeds max_n=" + std::to_string(opts.max_n));
    if (n > 62)
        throw CostGuardError("check_positive_cone: too many columns to enumerate");
    require_finite(A, "check_positive_cone");
    const MatrixXd G = gram(A);

    ConditionReport report;
    report.condition = opts.exhaustive ? "positive_cone_exhaustive" : "positive_cone";
    report.holds = true;

    auto invert_minor = [](const MatrixXd& M, const IndexSet& S) {
        try {
            return invert_spd(M);
        } catch (const SingularityError& e) {
            throw SingularityError("check_positive_cone: principal minor " + format_set(S) +
                                   " is singular: " + e.what());
        }
    };

    const unsigned long long subsets = 1ULL << n;
    for (unsigned long long mask = 1; mask < subsets; ++mask) {
        const IndexSet S = IndexSet::from_mask(mask, n);
        const Index k = S.size();

        if (!opts.exhaustive) {
            const MatrixXd R = invert_minor(principal_submatrix(G, S), S);
            const double threshold = opts.tol * R.cwiseAbs().maxCoeff();
            for (Index i = 0; i < k; ++i) {
                // Smallest row sum over all sign patterns is r_ii - sum_{j!=i}|r_ij|.
                const double margin = row_margin(R, i);
                if (!(margin > threshold)) {
                    report.holds = false;
                    report.witness = "S=" + format_set(S) + ", row " + std::to_string(S[i]) +
                                     ": r_ii - sum_{j!=i}|r_ij| = " + io::format_double(margin);
                    return report;
                }
            }
            continue;
        }

        const unsigned long long patterns = 1ULL << (k - 1);
        for (unsigned long long bmask = 0; bmask < patterns; ++bmask) {
            VectorXd b = VectorXd::Ones(n);
            for (Index t = 1; t < k; ++t)
                if (bmask & (1ULL << (t - 1)))
                    b(S[t]) = -1.0;
            const MatrixXd signed_gram = b.asDiagonal() * G * b.asDiagonal();
            const MatrixXd R = invert_minor(principal_submatrix(signed_gram, S), S);
            const VectorXd sums = R.rowwise().sum();
            const double threshold = opts.tol * R.cwiseAbs().maxCoeff();
            for (Index i = 0; i < k; ++i) {
                if (!(sums(i) > threshold)) {
                    VectorXd bs(k);
                    for (Index t = 0; t < k; ++t)
                        bs(t) = b(S[t]);
                    report.holds = false;
                    report.witness = "S=" + format_set(S) + ", B=" + format_signs(bs) + ", row " +
                                     std::to_string(S[i]) +
                                     ": row sum = " + io::format_double(sums(i));
                    return report;
                }
            }
        }
    }
    return report;
}

MatrixXd design_from_gram_inverse(const MatrixXd& H)
{
    require_square(H, "design_from_gram_inverse");
    require_finite(H, "design_from_gram_inverse");
    const double scale = H.cwiseAbs().maxCoeff();
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ArgumentError("design_from_gram_inverse: H is not symmetric");

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw SingularityError("design_from_gram_inverse: eigendecomposition failed");
    const VectorXd& ev = es.eigenvalues();
    const double threshold = kPivotThreshold * ev.cwiseAbs().maxCoeff();
    if (!(ev.minCoeff() > threshold))
        throw SingularityError("design_from_gram_inverse: H is not positive definite");

    const MatrixXd& V = es.eigenvectors();
    MatrixXd A = V * ev.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
    return 0.5 * (A + A.transpose());
}

bool verify_positive_cone_equivalence(const MatrixXd& H, double tol)
{
    require_square(H, "verify_positive_cone_equivalence");
    if (H.rows() > 10)
        throw CostGuardError("verify_positive_cone_equivalence: n <= 10 is required");
    const MatrixXd A = design_from_gram_inverse(H);
    const bool sdd = classify_dominance(H) == Dominance::SDD;
    PositiveConeOptions opts;
    opts.exhaustive = true;
    opts.tol = tol;
    const bool cone = check_positive_cone(A, opts).holds;
    return sdd == cone;
}

} // namespace l1path
