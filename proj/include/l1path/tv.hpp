#pragma once

// Analysis-l1 (total variation) denoising
//
//     x*(lambda) = argmin_x 1/2 ||y - x||^2 + lambda ||D x||_1
//
// reduced to a standard lasso in u = D x with A = D^T (D D^T)^{-1} and
// z = A D y, so that (A^T A)^{-1} = D D^T.

#include <iosfwd>
#include <vector>

#include "l1path/conditions.hpp"
#include "l1path/homotopy.hpp"

namespace l1path::tv {

/// (n-1) x n first difference operator: d_ii = 1, d_{i,i+1} = -1.
MatrixXd first_difference_matrix(Index n);

/// Observation y with a full-row-rank analysis operator D (m x n, m <= n).
/// (D D^T)^{-1} and the reduced design are computed once at construction.
class TVProblem
{
public:
    TVProblem(VectorXd y, MatrixXd D);

    const VectorXd& y() const { return y_; }
    const MatrixXd& D() const { return D_; }
    /// (D D^T)^{-1}
    const MatrixXd& ddt_inverse() const { return ddt_inv_; }
    /// D^T (D D^T)^{-1}, n x m
    const MatrixXd& synthesis() const { return synthesis_; }

    Index signal_size() const { return D_.cols(); }
    Index analysis_size() const { return D_.rows(); }

private:
    VectorXd y_;
    MatrixXd D_;
    MatrixXd ddt_inv_;
    MatrixXd synthesis_;
};

/// Throws SingularityError unless D has full row rank (QR with relative pivot
/// threshold 1e-10), ArgumentError when D has more rows than columns.
void require_full_row_rank(const MatrixXd& D);

/// The equivalent lasso problem in u = D x.
LassoProblem reformulate(const TVProblem& t);

/// x = y + D^T (D D^T)^{-1} (u - D y)
VectorXd recover_x(const TVProblem& t, const VectorXd& u);

/// 1/2 ||y - x||^2 + lambda ||D x||_1
double tv_objective(const TVProblem& t, const VectorXd& x, double lambda);

/// Holds iff D D^T is DD (any strength).
ConditionReport check_dd_analysis(const MatrixXd& D);

/// Stationarity of x for the TV problem at lambda > 0: x - y = D^T w with
/// w_i = -lambda sign((D x)_i) where (D x)_i != 0 and |w_i| <= lambda elsewhere.
bool tv_stationarity_check(const TVProblem& t, double lambda, const VectorXd& x, double tol);

struct TVPath
{
    SolutionPath lasso_path;           ///< in u = D x coordinates
    std::vector<VectorXd> x_breakpoints;
};

TVPath solve_tv_path(const TVProblem& t, const PathOptions& opts = {});

/// Number of entries with |v_i| > tol.
Index cardinality(const VectorXd& v, double tol);

/// CSV with header `lambda,x_1..x_n,u_1..u_m`.
void write_tv_csv(std::ostream& out, const TVPath& path);

} // namespace l1path::tv
