#pragma once

// Dense linear algebra primitives shared by every module: dominance
// classification, Gram matrices, SPD inversion, principal submatrices and
// the Schur recursion that maps H to (S-block of H^-1)^-1.
//
// All routines are templated on the Eigen expression type and work for any
// real scalar; the rest of the library instantiates them with double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "l1path/errors.hpp"

namespace l1path {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Relative pivot threshold used by every symmetric factorization.
inline constexpr double kPivotThreshold = 1e-12;

// ---------------------------------------------------------------------------
// Dominance classes

/// Row diagonal dominance, strongest applicable tag.
/// SDD: every row strict. IDD: every row non-strict, at least one strict.
/// DD: every row non-strict, none strict.
enum class Dominance { NotDD, DD, IDD, SDD };

constexpr std::string_view to_string(Dominance d)
{
    switch (d) {
    case Dominance::NotDD: return "NotDD";
    case Dominance::DD: return "DD";
    case Dominance::IDD: return "IDD";
    case Dominance::SDD: return "SDD";
    }
    return "?";
}

/// True for DD, IDD and SDD.
constexpr bool is_diagonally_dominant(Dominance d) { return d != Dominance::NotDD; }

// ---------------------------------------------------------------------------
// IndexSet

/// Strictly increasing list of 0-based indices.
class IndexSet
{
public:
    IndexSet() = default;

    explicit IndexSet(std::vector<Index> indices) : indices_(std::move(indices))
    {
        for (std::size_t k = 0; k < indices_.size(); ++k) {
            if (indices_[k] < 0)
                throw ArgumentError("IndexSet: negative index");
            if (k > 0 && indices_[k] <= indices_[k - 1])
                throw ArgumentError("IndexSet: indices must be strictly increasing");
        }
    }

    IndexSet(std::initializer_list<Index> indices) : IndexSet(std::vector<Index>(indices)) {}

    /// {0, ..., n-1}
    static IndexSet all(Index n)
    {
        std::vector<Index> v(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] = i;
        return IndexSet(std::move(v));
    }

    /// Members of the bitmask `mask` over {0, ..., n-1}.
    static IndexSet from_mask(unsigned long long mask, Index n)
    {
        std::vector<Index> v;
        for (Index i = 0; i < n; ++i)
            if (mask & (1ULL << i))
                v.push_back(i);
        return IndexSet(std::move(v));
    }

    /// {0, ..., n-1} minus this set.
    IndexSet complement(Index n) const
    {
        std::vector<Index> v;
        std::size_t k = 0;
        for (Index i = 0; i < n; ++i) {
            if (k < indices_.size() && indices_[k] == i)
                ++k;
            else
                v.push_back(i);
        }
        return IndexSet(std::move(v));
    }

    bool contains(Index i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

    /// Throws ArgumentError unless every index is < n.
    void require_within(Index n) const
    {
        if (!indices_.empty() && indices_.back() >= n)
            throw ArgumentError("IndexSet: index " + std::to_string(indices_.back()) +
                                " out of range for dimension " + std::to_string(n));
    }

    Index size() const { return static_cast<Index>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    Index operator[](Index k) const { return indices_[static_cast<std::size_t>(k)]; }
    std::span<const Index> view() const { return indices_; }
    const std::vector<Index>& vec() const { return indices_; }
    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<Index> indices_;
};

// ---------------------------------------------------------------------------
// Validation helpers

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& H, std::string_view what)
{
    if (H.rows() != H.cols() || H.rows() == 0)
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                             std::to_string(H.rows()) + "x" + std::to_string(H.cols()));
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& H, std::string_view what)
{
    if (!H.allFinite())
        throw ArgumentError(std::string(what) + ": matrix has non-finite entries");
}

// ---------------------------------------------------------------------------
// Diagonal dominance

/// h_ii - sum_{j != i} |h_ij|.
template <typename Derived>
typename Derived::Scalar row_margin(const Eigen::MatrixBase<Derived>& H, Index i)
{
    using Scalar = typename Derived::Scalar;
    Scalar off = 0;
    for (Index j = 0; j < H.cols(); ++j)
        if (j != i)
            off += std::abs(H(i, j));
    return H(i, i) - off;
}

/// Classify H. A row is non-strict when margin >= -slack and strict when
/// margin > slack; slack = 0 gives plain float comparisons. Any negative
/// diagonal entry yields NotDD.
template <typename Derived>
Dominance classify_dominance(const Eigen::MatrixBase<Derived>& H,
                             typename Derived::Scalar slack = 0)
{
    require_square(H, "classify_dominance");
    require_finite(H, "classify_dominance");
    const Index n = H.rows();
    bool any_strict = false;
    bool all_strict = true;
    for (Index i = 0; i < n; ++i) {
        if (H(i, i) < 0)
            return Dominance::NotDD;
        const auto margin = row_margin(H, i);
        if (margin < -slack)
            return Dominance::NotDD;
        if (margin > slack)
            any_strict = true;
        else
            all_strict = false;
    }
    if (all_strict)
        return Dominance::SDD;
    return any_strict ? Dominance::IDD : Dominance::DD;
}

/// First row that breaks non-strict dominance, if any.
template <typename Derived>
std::optional<Index> first_non_dominant_row(const Eigen::MatrixBase<Derived>& H,
                                            typename Derived::Scalar slack = 0)
{
    require_square(H, "first_non_dominant_row");
    for (Index i = 0; i < H.rows(); ++i)
        if (H(i, i) < 0 || row_margin(H, i) < -slack)
            return i;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Gram matrix and SPD inversion

/// A^T A, symmetrized by averaging with its transpose.
template <typename Derived>
Matrix<typename Derived::Scalar> gram(const Eigen::MatrixBase<Derived>& A)
{
    using Scalar = typename Derived::Scalar;
    if (A.cols() == 0 || A.rows() == 0)
        throw DimensionError("gram: matrix must have at least one row and one column");
    Matrix<Scalar> G = A.transpose() * A;
    return (Scalar(0.5) * (G + G.transpose())).eval();
}

/// LDL^T factorization of a symmetric positive definite matrix. Construction
/// fails with SingularityError when any pivot is <= kPivotThreshold * max|diag|,
/// which also rejects indefinite input.
template <typename Scalar>
class SpdFactorization
{
public:
    template <typename Derived>
    explicit SpdFactorization(const Eigen::MatrixBase<Derived>& G)
    {
        require_square(G, "SpdFactorization");
        require_finite(G, "SpdFactorization");
        const Scalar max_diag = G.diagonal().cwiseAbs().maxCoeff();
        ldlt_.compute(G);
        if (ldlt_.info() != Eigen::Success)
            throw SingularityError("symmetric factorization failed");
        const Scalar threshold = Scalar(kPivotThreshold) * max_diag;
        const auto& d = ldlt_.vectorD();
        for (Index k = 0; k < d.size(); ++k) {
            if (!(d(k) > threshold))
            {
                std::ostringstream msg;
                msg << "matrix is singular or not positive definite (pivot " << static_cast<double>(d(k))
                    << " below threshold " << static_cast<double>(threshold) << ")";
                throw SingularityError(msg.str());
            }
        }
    }

    template <typename Rhs>
    auto solve(const Eigen::MatrixBase<Rhs>& b) const
    {
        return ldlt_.solve(b);
    }

    Index size() const { return ldlt_.rows(); }

private:
    Eigen::LDLT<Matrix<Scalar>> ldlt_;
};

template <typename Derived>
SpdFactorization(const Eigen::MatrixBase<Derived>&) -> SpdFactorization<typename Derived::Scalar>;

/// G^{-1} for symmetric positive definite G; the result is symmetrized.
template <typename Derived>
Matrix<typename Derived::Scalar> invert_spd(const Eigen::MatrixBase<Derived>& G)
{
    using Scalar = typename Derived::Scalar;
    SpdFactorization<Scalar> factor(G);
    const Index n = G.rows();
    Matrix<Scalar> H = factor.solve(Matrix<Scalar>::Identity(n, n));
    return (Scalar(0.5) * (H + H.transpose())).eval();
}

// ---------------------------------------------------------------------------
// Principal submatrices and Schur reduction

/// Rows and columns of H listed in S, in S's order.
template <typename Derived>
Matrix<typename Derived::Scalar> principal_submatrix(const Eigen::MatrixBase<Derived>& H,
                                                     const IndexSet& S)
{
    require_square(H, "principal_submatrix");
    if (S.empty())
        throw ArgumentError("principal_submatrix: empty index set");
    S.require_within(H.rows());
    return H(S.vec(), S.vec());
}

/// Eliminate the last row/column: r_ij = h_ij - h_in h_jn / h_nn.
/// For invertible H this equals the inverse of the leading (n-1) block of H^{-1}.
template <typename Derived>
Matrix<typename Derived::Scalar> schur_reduce_last(const Eigen::MatrixBase<Derived>& H)
{
    using Scalar = typename Derived::Scalar;
    require_square(H, "schur_reduce_last");
    const Index n = H.rows();
    if (n < 2)
        throw ArgumentError("schur_reduce_last: need at least a 2x2 matrix");
    const Scalar pivot = H(n - 1, n - 1);
    if (pivot == Scalar(0))
        throw SingularityError("schur_reduce_last: zero pivot");
    const Vector<Scalar> c = H.col(n - 1).head(n - 1);
    Matrix<Scalar> R = H.topLeftCorner(n - 1, n - 1);
    R.noalias() -= (c * c.transpose()) / pivot;
    return R;
}

/// (principal_submatrix(H^{-1}, S))^{-1}, computed without inverting H: the
/// complement of S is moved to the tail and eliminated one index at a time
/// with schur_reduce_last.
template <typename Derived>
Matrix<typename Derived::Scalar> inverse_of_submatrix_inverse(const Eigen::MatrixBase<Derived>& H,
                                                              const IndexSet& S)
{
    using Scalar = typename Derived::Scalar;
    require_square(H, "inverse_of_submatrix_inverse");
    require_finite(H, "inverse_of_submatrix_inverse");
    if (S.empty())
        throw ArgumentError("inverse_of_submatrix_inverse: empty index set");
    const Index n = H.rows();
    S.require_within(n);

    const IndexSet tail = S.complement(n);
    std::vector<Index> order = S.vec();
    order.insert(order.end(), tail.begin(), tail.end());

    const Scalar threshold = Scalar(kPivotThreshold) * H.diagonal().cwiseAbs().maxCoeff();
    Matrix<Scalar> R = H(order, order);
    for (Index step = 0; step < tail.size(); ++step) {
        const Index last = R.rows() - 1;
        if (!(std::abs(R(last, last)) > threshold))
            throw SingularityError("inverse_of_submatrix_inverse: pivot below threshold while "
                                   "eliminating index " +
                                   std::to_string(order[static_cast<std::size_t>(last)]));
        R = schur_reduce_last(R);
    }
    return R;
}

// ---------------------------------------------------------------------------
// Mutual coherence

/// A with every column scaled to unit Euclidean norm.
template <typename Derived>
Matrix<typename Derived::Scalar> normalize_columns(const Eigen::MatrixBase<Derived>& A)
{
    Matrix<typename Derived::Scalar> N = A;
    for (Index j = 0; j < N.cols(); ++j) {
        const auto norm = N.col(j).norm();
        if (norm == 0)
            throw DegenerateColumnError("column " + std::to_string(j) + " is zero");
        N.col(j) /= norm;
    }
    return N;
}

/// max_{i != j} |<a_i, a_j>| over unit-normalized columns, clamped to [0, 1].
template <typename Derived>
typename Derived::Scalar mutual_coherence(const Eigen::MatrixBase<Derived>& A)
{
    using Scalar = typename Derived::Scalar;
    if (A.cols() < 2)
        throw ArgumentError("mutual_coherence: need at least two columns");
    require_finite(A, "mutual_coherence");
    const Matrix<Scalar> N = normalize_columns(A);
    const Matrix<Scalar> G = N.transpose() * N;
    Scalar mu = 0;
    for (Index i = 0; i < G.rows(); ++i)
        for (Index j = i + 1; j < G.cols(); ++j)
            mu = std::max(mu, std::abs(G(i, j)));
    return std::min(mu, Scalar(1));
}

} // namespace l1path
