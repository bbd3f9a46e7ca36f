#pragma once

// Random instance generators and independent reference routines shared by
// the unit and acceptance suites. Nothing here calls into the code paths it
// is used to check.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "l1path/matrix.hpp"

namespace l1path::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline MatrixXd gaussian_matrix(Rng& rng, Index m, Index n)
{
    std::normal_distribution<double> dist(0.0, 1.0);
    MatrixXd A(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i)
            A(i, j) = dist(rng);
    return A;
}

inline VectorXd gaussian_vector(Rng& rng, Index n)
{
    return gaussian_matrix(rng, n, 1).col(0);
}

/// m x n with orthonormal columns (m >= n).
inline MatrixXd orthonormal_columns(Rng& rng, Index m, Index n)
{
    Eigen::HouseholderQR<MatrixXd> qr(gaussian_matrix(rng, m, n));
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(m, n);
    return Q;
}

/// Symmetric DD matrix: off-diagonals uniform in [-1, 1] (some zeroed), each
/// diagonal set to the off-diagonal absolute row sum plus a nonnegative slack. With probability `equality_prob` a row
/// gets zero slack, so it sits exactly on the DD boundary.
/// Redrawn until full rank (smallest eigenvalue above 1e-6 of the largest
/// entry), since an all-equality decoupled block would be singular.
inline MatrixXd random_dd_symmetric(Rng& rng, Index n, double equality_prob = 0.3,
                                    double zero_prob = 0.15)
{
    for (;;) {
    MatrixXd H = MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            // Multiples of 2^-10 keep every row sum exact in any summation order.
            const double v = uniform(rng, 0, 1) < zero_prob
                                 ? 0.0
                                 : std::round(uniform(rng, -1, 1) * 1024.0) / 1024.0;
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    bool any_strict = false;
    for (Index i = 0; i < n; ++i) {
        double off = 0;
        for (Index j = 0; j < n; ++j)
            if (j != i)
                off += std::abs(H(i, j));
        double slack = uniform(rng, 0, 1) < equality_prob ? 0.0 : uniform(rng, 0.05, 1.0);
        if (i == n - 1 && !any_strict)
            slack = uniform(rng, 0.05, 1.0);
        any_strict = any_strict || slack > 0;
        H(i, i) = off + slack;
    }
    const double smallest = Eigen::SelfAdjointEigenSolver<MatrixXd>(H).eigenvalues().minCoeff();
    if (smallest > 1e-6 * H.cwiseAbs().maxCoeff())
        return H;
    }
}

/// Random symmetric positive definite matrix with condition number kept modest.
inline MatrixXd random_spd(Rng& rng, Index n)
{
    const MatrixXd B = gaussian_matrix(rng, n, n);
    return B.transpose() * B + 0.5 * MatrixXd::Identity(n, n);
}

/// Textbook Gauss-Jordan inverse with partial pivoting; independent of Eigen's
/// factorizations.
inline MatrixXd gauss_jordan_inverse(MatrixXd M)
{
    const Index n = M.rows();
    MatrixXd inv = MatrixXd::Identity(n, n);
    for (Index col = 0; col < n; ++col) {
        Index pivot = col;
        for (Index r = col + 1; r < n; ++r)
            if (std::abs(M(r, col)) > std::abs(M(pivot, col)))
                pivot = r;
        M.row(col).swap(M.row(pivot));
        inv.row(col).swap(inv.row(pivot));
        const double p = M(col, col);
        M.row(col) /= p;
        inv.row(col) /= p;
        for (Index r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const double f = M(r, col);
            M.row(r) -= f * M.row(col);
            inv.row(r) -= f * inv.row(col);
        }
    }
    return inv;
}

/// Row-by-row dominance verdict written out longhand: 0 NotDD, 1 DD, 2 IDD, 3 SDD.
inline int reference_dominance(const MatrixXd& H, double slack = 0.0)
{
    int strict = 0;
    for (Index i = 0; i < H.rows(); ++i) {
        double off = 0;
        for (Index j = 0; j < H.cols(); ++j)
            if (j != i)
                off += std::abs(H(i, j));
        if (H(i, i) < 0 || H(i, i) - off < -slack)
            return 0;
        if (H(i, i) - off > slack)
            ++strict;
    }
    if (strict == H.rows())
        return 3;
    return strict > 0 ? 2 : 1;
}

inline double soft_threshold(double v, double lambda)
{
    const double mag = std::abs(v) - lambda;
    return mag > 0 ? std::copysign(mag, v) : 0.0;
}

/// Unique minimizer of the strongly convex lasso objective by cyclic
/// coordinate descent, run until the iterates stop moving. Used only for
/// cross-checks where the sign-pattern oracle is too expensive.
inline VectorXd coordinate_descent(const MatrixXd& A, const VectorXd& y, double lambda,
                                   int sweeps = 200000, double tol = 1e-15)
{
    const Index n = A.cols();
    const MatrixXd G = A.transpose() * A;
    const VectorXd c = A.transpose() * y;
    VectorXd u = VectorXd::Zero(n);
    for (int s = 0; s < sweeps; ++s) {
        double moved = 0;
        for (Index j = 0; j < n; ++j) {
            const double rho = c(j) - G.row(j).dot(u) + G(j, j) * u(j);
            const double next = soft_threshold(rho, lambda) / G(j, j);
            moved = std::max(moved, std::abs(next - u(j)));
            u(j) = next;
        }
        if (moved < tol)
            break;
    }
    return u;
}

/// Every subset mask with its members, for small n.
inline std::vector<std::vector<Index>> all_nonempty_subsets(Index n)
{
    std::vector<std::vector<Index>> out;
    for (unsigned long long mask = 1; mask < (1ULL << n); ++mask) {
        std::vector<Index> s;
        for (Index i = 0; i < n; ++i)
            if (mask & (1ULL << i))
                s.push_back(i);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace l1path::testing
