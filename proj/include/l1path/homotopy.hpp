#pragma once

// Exact solution path of
//
//     u*(lambda) = argmin_u  1/2 ||y - A u||^2 + lambda ||u||_1
//
// by the homotopy method (lasso-modified LARS: indices both enter and leave
// the active set), together with a sign-pattern enumeration oracle, KKT
// checks and the monotone-active-set audit.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l1path/matrix.hpp"

namespace l1path {

/// Immutable (A, y) pair with the cached Gram matrix and correlations A^T y.
class LassoProblem
{
public:
    LassoProblem(MatrixXd A, VectorXd y);

    const MatrixXd& A() const { return A_; }
    const VectorXd& y() const { return y_; }
    const MatrixXd& gram() const { return gram_; }
    const VectorXd& correlation() const { return aty_; }
    Index rows() const { return A_.rows(); }
    Index cols() const { return A_.cols(); }

    /// ||A^T y||_inf, the smallest lambda with u*(lambda) = 0.
    double lambda_max() const { return aty_.lpNorm<Eigen::Infinity>(); }

    /// 1/2 ||y - A u||^2 + lambda ||u||_1
    double objective(const VectorXd& u, double lambda) const;

private:
    MatrixXd A_;
    VectorXd y_;
    MatrixXd gram_;
    VectorXd aty_;
};

enum class EventKind { Start, Add, Remove, Multi, End };

/// What happened at a breakpoint. Indices are 0-based.
struct Event
{
    EventKind kind = EventKind::Start;
    std::vector<Index> added;
    std::vector<Index> removed;
};

/// Text form used in path CSV files, with 1-based indices matching the
/// u_1..u_n columns: "start", "end", "add:3", "remove:2", "multi:-2+5".
std::string format_event(const Event& e);
Event parse_event(std::string_view text);

/// One breakpoint of the path. `active` and `signs` describe the working set
/// on the segment that starts here and continues toward smaller lambda (for
/// the final breakpoint: the set of the last segment).
struct Breakpoint
{
    double lambda = 0;
    VectorXd u;
    IndexSet active;
    VectorXd signs;
    Event event;
};

struct PathOptions
{
    double lambda_min = 0.0;                     ///< stop early at this lambda
    std::optional<std::size_t> max_breakpoints;  ///< default 10 n + 10
    double event_tol = 1e-12;                    ///< relative to lambda_0
};

struct SolutionPath
{
    LassoProblem problem;
    std::vector<Breakpoint> breakpoints; ///< strictly decreasing lambda

    double lambda_start() const { return breakpoints.front().lambda; }
    double lambda_end() const { return breakpoints.back().lambda; }
};

/// True iff some s in the subdifferential of ||u||_1 makes
/// ||A^T A u + lambda s - A^T y||_inf <= tol. Requires lambda > 0.
bool subgradient_check(const LassoProblem& p, double lambda, const VectorXd& u, double tol);

/// lambda = 0 counterpart: ||A^T (y - A u)||_inf <= tol.
bool least_squares_check(const LassoProblem& p, const VectorXd& u, double tol);

/// Homotopy from lambda_0 = ||A^T y||_inf down to opts.lambda_min.
/// Throws SingularityError when an active Gram block is singular and
/// CycleGuardError when the breakpoint budget is exhausted.
SolutionPath solve_path(const LassoProblem& p, const PathOptions& opts = {});

/// Linear interpolation between breakpoints; zero for lambda >= lambda_0.
VectorXd eval_path(const SolutionPath& path, double lambda);

/// u with u_S = (A_S^T A_S)^{-1} (A_S^T y - lambda s) and zeros elsewhere.
VectorXd fixed_support_solve(const LassoProblem& p, double lambda, const IndexSet& support,
                             const VectorXd& signs);

struct OracleOptions
{
    Index max_n = 14;
};

/// Brute-force minimizer: tries every sign pattern in {-1, 0, +1}^n, solves the
/// on-support normal equations and accepts the pattern whose solution has
/// matching signs and satisfies |a_j^T (y - A u)| <= lambda off the support.
/// Supports are visited in increasing bitmask order, signs likewise; the first
/// accepted solution is returned after checking every other accepted one
/// agrees with it.
VectorXd oracle_solve(const LassoProblem& p, double lambda, const OracleOptions& opts = {});

struct AuditReport
{
    bool cardinality_monotone = true;
    bool magnitude_monotone = true;
    std::vector<std::string> failures;

    bool passed() const { return cardinality_monotone && magnitude_monotone; }
};

/// Card[I(u)] must not shrink and no index may leave as lambda decreases;
/// |u_i| must be nonincreasing in lambda on every segment.
AuditReport monotonicity_audit(std::span<const Breakpoint> breakpoints, double tol = 1e-9);
inline AuditReport monotonicity_audit(const SolutionPath& path, double tol = 1e-9)
{
    return monotonicity_audit(path.breakpoints, tol);
}

struct ParetoPoint
{
    double lambda;
    double l1_norm;      ///< ||u||_1
    double residual_sq;  ///< ||y - A u||^2
};

std::vector<ParetoPoint> pareto_points(const SolutionPath& path);

/// CSV with header `lambda,event,u_1,...,u_n`, one row per breakpoint.
void write_path_csv(std::ostream& out, std::span<const Breakpoint> breakpoints);

/// Inverse of write_path_csv. Active sets and signs are rebuilt from the
/// nonzero entries of u.
std::vector<Breakpoint> read_path_csv(std::istream& in);

} // namespace l1path
