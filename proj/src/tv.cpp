#include "l1path/tv.hpp"

#include <cmath>
#include <ostream>

#include "l1path/io.hpp"

namespace l1path::tv {

MatrixXd first_difference_matrix(Index n)
{
    if (n < 2)
        throw ArgumentError("first_difference_matrix: n must be >= 2");
    MatrixXd D = MatrixXd::Zero(n - 1, n);
    for (Index i = 0; i + 1 < n; ++i) {
        D(i, i) = 1.0;
        D(i, i + 1) = -1.0;
    }
    return D;
}

void require_full_row_rank(const MatrixXd& D)
{
    if (D.rows() < 1 || D.cols() < 1)
        throw DimensionError("analysis operator must be non-empty");
    if (D.rows() > D.cols())
        throw ArgumentError("analysis operator has more rows than columns (" +
                            std::to_string(D.rows()) + "x" + std::to_string(D.cols()) + ")");
    require_finite(D, "analysis operator");
    Eigen::ColPivHouseholderQR<MatrixXd> qr(D.transpose());
    qr.setThreshold(1e-10);
    if (qr.rank() != D.rows())
        throw SingularityError("analysis operator does not have full row rank (rank " +
                               std::to_string(qr.rank()) + " < " + std::to_string(D.rows()) + ")");
}

TVProblem::TVProblem(VectorXd y, MatrixXd D) : y_(std::move(y)), D_(std::move(D))
{
    if (y_.size() != D_.cols())
        throw DimensionError("TVProblem: y has length " + std::to_string(y_.size()) +
                             " but D has " + std::to_string(D_.cols()) + " columns");
    if (!y_.allFinite())
        throw ArgumentError("TVProblem: y has non-finite entries");
    require_full_row_rank(D_);
    ddt_inv_ = invert_spd(MatrixXd(D_ * D_.transpose()));
    synthesis_ = D_.transpose() * ddt_inv_;
}

LassoProblem reformulate(const TVProblem& t)
{
    const VectorXd z = t.synthesis() * (t.D() * t.y());
    return LassoProblem(t.synthesis(), z);
}

VectorXd recover_x(const TVProblem& t, const VectorXd& u)
{
    if (u.size() != t.analysis_size())
        throw DimensionError("recover_x: u has length " + std::to_string(u.size()) +
                             ", expected " + std::to_string(t.analysis_size()));
    return t.y() + t.synthesis() * (u - t.D() * t.y());
}

double tv_objective(const TVProblem& t, const VectorXd& x, double lambda)
{
    return 0.5 * (t.y() - x).squaredNorm() + lambda * (t.D() * x).lpNorm<1>();
}

ConditionReport check_dd_analysis(const MatrixXd& D)
{
    require_full_row_rank(D);
    const MatrixXd ddt = D * D.transpose();
    ConditionReport report;
    report.condition = "dd_analysis";
    report.dominance = classify_dominance(ddt);
    report.holds = is_diagonally_dominant(*report.dominance);
    if (!report.holds) {
        const Index i = *first_non_dominant_row(ddt);
        report.witness = "D D^T row " + std::to_string(i) + ": diagonal " +
                         io::format_double(ddt(i, i)) + " < off-diagonal sum " +
                         io::format_double(ddt(i, i) - row_margin(ddt, i));
    }
    return report;
}

bool tv_stationarity_check(const TVProblem& t, double lambda, const VectorXd& x, double tol)
{
    if (!(lambda > 0))
        throw ArgumentError("tv_stationarity_check: lambda must be positive");
    if (x.size() != t.signal_size())
        throw DimensionError("tv_stationarity_check: x has wrong length");
    const VectorXd g = x - t.y();
    const VectorXd w = t.ddt_inverse() * (t.D() * g);
    if ((t.D().transpose() * w - g).lpNorm<Eigen::Infinity>() > tol)
        return false;
    const VectorXd Dx = t.D() * x;
    for (Index i = 0; i < Dx.size(); ++i) {
        if (std::abs(Dx(i)) > tol) {
            const double s = Dx(i) > 0 ? 1.0 : -1.0;
            if (std::abs(w(i) + lambda * s) > tol)
                return false;
        } else if (std::abs(w(i)) > lambda + tol) {
            return false;
        }
    }
    return true;
}

TVPath solve_tv_path(const TVProblem& t, const PathOptions& opts)
{
    TVPath out{solve_path(reformulate(t), opts), {}};
    out.x_breakpoints.reserve(out.lasso_path.breakpoints.size());
    for (const auto& b : out.lasso_path.breakpoints)
        out.x_breakpoints.push_back(recover_x(t, b.u));
    return out;
}

Index cardinality(const VectorXd& v, double tol)
{
    return (v.array().abs() > tol).count();
}

void write_tv_csv(std::ostream& out, const TVPath& path)
{
    const auto& bps = path.lasso_path.breakpoints;
    const Index n = path.x_breakpoints.empty() ? 0 : path.x_breakpoints.front().size();
    const Index m = bps.empty() ? 0 : bps.front().u.size();
    out << "lambda";
    for (Index i = 0; i < n; ++i)
        out << ",x_" << (i + 1);
    for (Index i = 0; i < m; ++i)
        out << ",u_" << (i + 1);
    out << '\n';
    for (std::size_t k = 0; k < bps.size(); ++k) {
        out << io::format_double(bps[k].lambda);
        for (Index i = 0; i < n; ++i)
            out << ',' << io::format_double(path.x_breakpoints[k](i));
        for (Index i = 0; i < m; ++i)
            out << ',' << io::format_double(bps[k].u(i));
        out << '\n';
    }
}

} // namespace l1path::tv
