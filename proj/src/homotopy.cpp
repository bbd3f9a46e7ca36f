#include "l1path/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "l1path/io.hpp"

namespace l1path {

namespace {

std::string format_set(const std::vector<Index>& s)
{
    std::string out = "{";
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k > 0)
            out += ',';
        out += std::to_string(s[k]);
    }
    return out + "}";
}

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

VectorXd gather(const VectorXd& v, const std::vector<Index>& idx)
{
    VectorXd out(static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        out(static_cast<Index>(k)) = v(idx[k]);
    return out;
}

struct Candidate
{
    double lambda;
    Index index;
    bool add;
    double sign; ///< sign taken by an entering index
};

} // namespace

// ---------------------------------------------------------------------------
// LassoProblem

LassoProblem::LassoProblem(MatrixXd A, VectorXd y) : A_(std::move(A)), y_(std::move(y))
{
    if (A_.rows() < 1 || A_.cols() < 1)
        throw DimensionError("LassoProblem: A must be non-empty");
    if (A_.rows() != y_.size())
        throw DimensionError("LassoProblem: A has " + std::to_string(A_.rows()) +
                             " rows but y has length " + std::to_string(y_.size()));
    require_finite(A_, "LassoProblem");
    if (!y_.allFinite())
        throw ArgumentError("LassoProblem: y has non-finite entries");
    gram_ = l1path::gram(A_);
    aty_ = A_.transpose() * y_;
}

double LassoProblem::objective(const VectorXd& u, double lambda) const
{
    return 0.5 * (y_ - A_ * u).squaredNorm() + lambda * u.lpNorm<1>();
}

// ---------------------------------------------------------------------------
// Events

std::string format_event(const Event& e)
{
    switch (e.kind) {
    case EventKind::Start: return "start";
    case EventKind::End: return "end";
    case EventKind::Add: return "add:" + std::to_string(e.added.at(0) + 1);
    case EventKind::Remove: return "remove:" + std::to_string(e.removed.at(0) + 1);
    case EventKind::Multi: {
        std::string s = "multi:";
        for (Index i : e.removed)
            s += "-" + std::to_string(i + 1);
        for (Index i : e.added)
            s += "+" + std::to_string(i + 1);
        return s;
    }
    }
    return "?";
}

Event parse_event(std::string_view text)
{
    auto index_of = [&](std::string_view digits) -> Index {
        const double v = io::parse_double(digits);
        if (v < 1 || v != std::floor(v))
            throw ParseError("bad index in event '" + std::string(text) + "'");
        return static_cast<Index>(v) - 1;
    };
    Event e;
    if (text == "start") {
        e.kind = EventKind::Start;
    } else if (text == "end") {
        e.kind = EventKind::End;
    } else if (text.starts_with("add:")) {
        e.kind = EventKind::Add;
        e.added.push_back(index_of(text.substr(4)));
    } else if (text.starts_with("remove:")) {
        e.kind = EventKind::Remove;
        e.removed.push_back(index_of(text.substr(7)));
    } else if (text.starts_with("multi:")) {
        e.kind = EventKind::Multi;
        std::string_view rest = text.substr(6);
        while (!rest.empty()) {
            const char op = rest.front();
            if (op != '+' && op != '-')
                throw ParseError("bad event '" + std::string(text) + "'");
            rest.remove_prefix(1);
            const auto stop = rest.find_first_of("+-");
            const auto digits = rest.substr(0, stop);
            (op == '+' ? e.added : e.removed).push_back(index_of(digits));
            rest = stop == std::string_view::npos ? std::string_view{} : rest.substr(stop);
        }
    } else {
        throw ParseError("unknown event '" + std::string(text) + "'");
    }
    return e;
}

// ---------------------------------------------------------------------------
// Optimality checks

bool subgradient_check(const LassoProblem& p, double lambda, const VectorXd& u, double tol)
{
    if (!(lambda > 0))
        throw ArgumentError("subgradient_check: lambda must be positive");
    if (u.size() != p.cols())
        throw DimensionError("subgradient_check: u has wrong length");
    const VectorXd corr = p.A().transpose() * (p.y() - p.A() * u);
    for (Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) > tol) {
            if (std::abs(corr(i) - lambda * sign_of(u(i))) > tol)
                return false;
        } else if (std::abs(corr(i)) > lambda + tol) {
            return false;
        }
    }
    return true;
}

bool least_squares_check(const LassoProblem& p, const VectorXd& u, double tol)
{
    if (u.size() != p.cols())
        throw DimensionError("least_squares_check: u has wrong length");
    const VectorXd corr = p.A().transpose() * (p.y() - p.A() * u);
    return corr.lpNorm<Eigen::Infinity>() <= tol;
}

// ---------------------------------------------------------------------------
// Homotopy

SolutionPath solve_path(const LassoProblem& p, const PathOptions& opts)
{
    const Index n = p.cols();
    for (Index j = 0; j < n; ++j)
        if (p.A().col(j).squaredNorm() == 0)
            throw ArgumentError("solve_path: column " + std::to_string(j) + " of A is zero");
    if (!(opts.lambda_min >= 0))
        throw ArgumentError("solve_path: lambda_min must be >= 0");

    const MatrixXd& G = p.gram();
    const VectorXd& c = p.correlation();
    const std::size_t budget = opts.max_breakpoints.value_or(static_cast<std::size_t>(10 * n + 10));
    const double lambda0 = p.lambda_max();

    SolutionPath path{p, {}};
    if (lambda0 == 0) {
        path.breakpoints.push_back({0.0, VectorXd::Zero(n), {}, VectorXd(), {}});
        return path;
    }
    const double tol = opts.event_tol * lambda0;
    const double floor = opts.lambda_min;

    // Working set (kept sorted) and the sign of every member.
    std::vector<Index> active;
    VectorXd sign = VectorXd::Zero(n);
    for (Index j = 0; j < n; ++j) {
        if (std::abs(c(j)) >= lambda0 - tol) {
            active.push_back(j);
            sign(j) = sign_of(c(j));
        }
    }

    auto record = [&](double lambda, const VectorXd& u, Event event) {
        if (path.breakpoints.size() >= budget)
            throw CycleGuardError("solve_path: more than " + std::to_string(budget) +
                                  " breakpoints");
        path.breakpoints.push_back({lambda, u, IndexSet(active), gather(sign, active),
                                    std::move(event)});
    };

    Event start{EventKind::Start, active, {}};
    record(lambda0, VectorXd::Zero(n), start);
    if (floor >= lambda0)
        return path;

    double lambda = lambda0;
    for (;;) {
        // On this segment u_W(l) = v - l d with Psi v = c_W and Psi d = s_W.
        const MatrixXd psi = G(active, active);
        VectorXd v, d;
        try {
            SpdFactorization<double> factor(psi);
            v = factor.solve(gather(c, active));
            d = factor.solve(gather(sign, active));
        } catch (const SingularityError& e) {
            throw SingularityError("solve_path: Gram block of active set " + format_set(active) +
                                   " is singular at lambda=" + io::format_double(lambda) + ": " +
                                   e.what());
        }

        std::vector<Candidate> candidates;
        auto consider = [&](double at, Index index, bool add, double s) {
            if (std::isfinite(at) && at < lambda - tol && at > floor + tol)
                candidates.push_back({at, index, add, s});
        };

        for (std::size_t k = 0; k < active.size(); ++k) {
            const auto kk = static_cast<Index>(k);
            if (d(kk) != 0)
                consider(v(kk) / d(kk), active[k], false, 0.0);
        }

        // Inactive correlations are affine: a_j^T (y - A u(l)) = r_j + l q_j.
        const MatrixXd cross = G(Eigen::all, active);
        const VectorXd r = c - cross * v;
        const VectorXd q = cross * d;
        for (Index j = 0; j < n; ++j) {
            if (std::binary_search(active.begin(), active.end(), j))
                continue;
            if (q(j) != 1.0)
                consider(r(j) / (1.0 - q(j)), j, true, 1.0);
            if (q(j) != -1.0)
                consider(-r(j) / (1.0 + q(j)), j, true, -1.0);
        }

        if (candidates.empty()) {
            VectorXd u = VectorXd::Zero(n);
            const VectorXd u_active = v - floor * d;
            for (std::size_t k = 0; k < active.size(); ++k)
                u(active[k]) = u_active(static_cast<Index>(k));
            record(floor, u, Event{EventKind::End, {}, {}});
            return path;
        }

        double next = floor;
        for (const auto& cand : candidates)
            next = std::max(next, cand.lambda);

        VectorXd u = VectorXd::Zero(n);
        const VectorXd u_active = v - next * d;
        for (std::size_t k = 0; k < active.size(); ++k)
            u(active[k]) = u_active(static_cast<Index>(k));

        // Everything within tol of the leading event happens together;
        // removals are applied before additions.
        std::vector<Index> added, removed;
        for (const auto& cand : candidates) {
            if (cand.lambda < next - tol)
                continue;
            if (cand.add) {
                if (std::find(added.begin(), added.end(), cand.index) == added.end()) {
                    added.push_back(cand.index);
                    sign(cand.index) = cand.sign;
                }
            } else {
                removed.push_back(cand.index);
            }
        }
        std::sort(added.begin(), added.end());
        std::sort(removed.begin(), removed.end());

        for (Index i : removed) {
            u(i) = 0.0;
            sign(i) = 0.0;
            active.erase(std::find(active.begin(), active.end(), i));
        }
        for (Index j : added)
            active.insert(std::lower_bound(active.begin(), active.end(), j), j);

        Event event;
        if (added.size() + removed.size() > 1)
            event.kind = EventKind::Multi;
        else
            event.kind = added.empty() ? EventKind::Remove : EventKind::Add;
        event.added = std::move(added);
        event.removed = std::move(removed);

        record(next, u, std::move(event));
        lambda = next;
    }
}

VectorXd eval_path(const SolutionPath& path, double lambda)
{
    const auto& bps = path.breakpoints;
    if (!(lambda >= 0))
        throw ArgumentError("eval_path: lambda must be >= 0");
    const Index n = path.problem.cols();
    if (lambda >= bps.front().lambda)
        return VectorXd::Zero(n);
    if (lambda < bps.back().lambda)
        throw RangeError("eval_path: lambda=" + io::format_double(lambda) +
                         " is below the last breakpoint " + io::format_double(bps.back().lambda));

    // First breakpoint with lambda_k <= lambda (lambdas are decreasing).
    const auto it = std::partition_point(bps.begin(), bps.end(),
                                         [&](const Breakpoint& b) { return b.lambda > lambda; });
    const auto k = static_cast<std::size_t>(it - bps.begin());
    const Breakpoint& lo = bps[k];
    if (lo.lambda == lambda)
        return lo.u;
    const Breakpoint& hi = bps[k - 1];
    const double t = (lambda - lo.lambda) / (hi.lambda - lo.lambda);
    return lo.u + t * (hi.u - lo.u);
}

VectorXd fixed_support_solve(const LassoProblem& p, double lambda, const IndexSet& support,
                             const VectorXd& signs)
{
    const Index n = p.cols();
    if (signs.size() != support.size())
        throw DimensionError("fixed_support_solve: one sign per support index is required");
    VectorXd u = VectorXd::Zero(n);
    if (support.empty())
        return u;
    support.require_within(n);
    const SpdFactorization<double> factor(principal_submatrix(p.gram(), support));
    const VectorXd rhs = gather(p.correlation(), support.vec()) - lambda * signs;
    const VectorXd u_on = factor.solve(rhs);
    for (Index k = 0; k < support.size(); ++k)
        u(support[k]) = u_on(k);
    return u;
}

VectorXd oracle_solve(const LassoProblem& p, double lambda, const OracleOptions& opts)
{
    const Index n = p.cols();
    if (n > opts.max_n || n > 62)
        throw CostGuardError("oracle_solve: n=" + std::to_string(n) + " exceeds max_n=" +
                             std::to_string(opts.max_n));
    if (!(lambda > 0))
        throw ArgumentError("oracle_solve: lambda must be positive");

    const MatrixXd& G = p.gram();
    const VectorXd& c = p.correlation();
    const double tol = 1e-9 * std::max({1.0, lambda, p.lambda_max()});

    std::optional<VectorXd> accepted;
    double nearest_violation = std::numeric_limits<double>::infinity();
    std::string nearest_pattern;

    auto pattern_text = [&](const IndexSet& S, const VectorXd& s) {
        std::string t(static_cast<std::size_t>(n), '0');
        for (Index k = 0; k < S.size(); ++k)
            t[static_cast<std::size_t>(S[k])] = s(k) > 0 ? '+' : '-';
        return t;
    };

    auto offer = [&](const IndexSet& S, const VectorXd& s, const VectorXd& u_on) {
        double violation = 0;
        for (Index k = 0; k < S.size(); ++k)
            violation = std::max(violation, -s(k) * u_on(k));
        VectorXd u = VectorXd::Zero(n);
        for (Index k = 0; k < S.size(); ++k)
            u(S[k]) = u_on(k);
        const VectorXd corr = c - G * u;
        for (Index j = 0; j < n; ++j)
            if (!S.contains(j))
                violation = std::max(violation, std::abs(corr(j)) - lambda);

        if (violation > tol) {
            if (violation < nearest_violation) {
                nearest_violation = violation;
                nearest_pattern = pattern_text(S, s);
            }
            return;
        }
        if (!accepted) {
            accepted = u;
            return;
        }
        const double scale = 1.0 + accepted->lpNorm<Eigen::Infinity>();
        if ((u - *accepted).lpNorm<Eigen::Infinity>() > 1e-6 * scale)
            throw OracleFailure("oracle_solve: patterns " + pattern_text(S, s) +
                                " and an earlier one give different minimizers at lambda=" +
                                io::format_double(lambda));
    };

    const unsigned long long supports = 1ULL << n;
    for (unsigned long long mask = 0; mask < supports; ++mask) {
        const IndexSet S = IndexSet::from_mask(mask, n);
        const Index k = S.size();
        if (k == 0) {
            offer(S, VectorXd(), VectorXd());
            continue;
        }
        std::optional<SpdFactorization<double>> factor;
        try {
            factor.emplace(principal_submatrix(G, S));
        } catch (const SingularityError&) {
            continue;
        }
        const VectorXd c_on = gather(c, S.vec());
        for (unsigned long long smask = 0; smask < (1ULL << k); ++smask) {
            VectorXd s(k);
            for (Index t = 0; t < k; ++t)
                s(t) = (smask & (1ULL << t)) ? -1.0 : 1.0;
            const VectorXd u_on = factor->solve(c_on - lambda * s);
            offer(S, s, u_on);
        }
    }

    if (!accepted)
        throw OracleFailure("oracle_solve: no sign pattern accepted at lambda=" +
                            io::format_double(lambda) + "; nearest miss " + nearest_pattern +
                            " violates by " + io::format_double(nearest_violation));
    return *accepted;
}

// ---------------------------------------------------------------------------
// Audit

AuditReport monotonicity_audit(std::span<const Breakpoint> bps, double tol)
{
    AuditReport report;
    auto where = [&](std::size_t k) {
        return "breakpoint " + std::to_string(k) + " (lambda=" + io::format_double(bps[k].lambda) +
               ")";
    };
    auto cardinality = [&](const VectorXd& u) {
        const double cut = tol * (1.0 + u.lpNorm<Eigen::Infinity>());
        return (u.array().abs() > cut).count();
    };

    for (std::size_t k = 1; k < bps.size(); ++k) {
        const Breakpoint& prev = bps[k - 1];
        const Breakpoint& cur = bps[k];

        if (!cur.event.removed.empty()) {
            report.cardinality_monotone = false;
            report.failures.push_back(where(k) + ": " + format_event(cur.event));
        }
        const auto card_prev = cardinality(prev.u);
        const auto card_cur = cardinality(cur.u);
        if (card_cur < card_prev) {
            report.cardinality_monotone = false;
            report.failures.push_back(where(k) + ": Card[I] drops from " +
                                      std::to_string(card_prev) + " to " +
                                      std::to_string(card_cur));
        }

        // Affine on the segment, so endpoint magnitudes decide monotonicity.
        const double cut =
            tol * (1.0 + std::max(prev.u.lpNorm<Eigen::Infinity>(), cur.u.lpNorm<Eigen::Infinity>()));
        for (Index i = 0; i < cur.u.size(); ++i) {
            const double a = prev.u(i);
            const double b = cur.u(i);
            const bool crosses = (a > cut && b < -cut) || (a < -cut && b > cut);
            if (crosses || std::abs(b) < std::abs(a) - cut) {
                report.magnitude_monotone = false;
                report.failures.push_back("segment " + std::to_string(k) + " (lambda " +
                                          io::format_double(prev.lambda) + " -> " +
                                          io::format_double(cur.lambda) + "): |u_" +
                                          std::to_string(i + 1) + "| shrinks from " +
                                          io::format_double(std::abs(a)) + " to " +
                                          io::format_double(std::abs(b)));
            }
        }
    }
    return report;
}

std::vector<ParetoPoint> pareto_points(const SolutionPath& path)
{
    std::vector<ParetoPoint> out;
    out.reserve(path.breakpoints.size());
    for (const auto& b : path.breakpoints) {
        const VectorXd r = path.problem.y() - path.problem.A() * b.u;
        out.push_back({b.lambda, b.u.lpNorm<1>(), r.squaredNorm()});
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

void write_path_csv(std::ostream& out, std::span<const Breakpoint> bps)
{
    const Index n = bps.empty() ? 0 : bps.front().u.size();
    out << "lambda,event";
    for (Index i = 0; i < n; ++i)
        out << ",u_" << (i + 1);
    out << '\n';
    for (const auto& b : bps) {
        out << io::format_double(b.lambda) << ',' << format_event(b.event);
        for (Index i = 0; i < n; ++i)
            out << ',' << io::format_double(b.u(i));
        out << '\n';
    }
}

std::vector<Breakpoint> read_path_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("path csv: empty input");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (!line.starts_with("lambda,event"))
        throw ParseError("path csv: header must start with 'lambda,event'");
    const auto header = io::split_fields(line);
    const Index n = static_cast<Index>(header.size()) - 2;
    for (Index i = 0; i < n; ++i)
        if (header[static_cast<std::size_t>(i + 2)] != "u_" + std::to_string(i + 1))
            throw ParseError("path csv: expected column u_" + std::to_string(i + 1));

    std::vector<Breakpoint> bps;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        const auto fields = io::split_fields(line);
        if (static_cast<Index>(fields.size()) != n + 2)
            throw ParseError("path csv line " + std::to_string(lineno) + ": expected " +
                             std::to_string(n + 2) + " fields");
        Breakpoint b;
        b.lambda = io::parse_double(fields[0]);
        b.event = parse_event(fields[1]);
        b.u.resize(n);
        std::vector<Index> nz;
        for (Index i = 0; i < n; ++i) {
            b.u(i) = io::parse_double(fields[static_cast<std::size_t>(i + 2)]);
            if (b.u(i) != 0)
                nz.push_back(i);
        }
        b.active = IndexSet(nz);
        b.signs = gather(b.u, nz).unaryExpr([](double x) { return sign_of(x); });
        if (!bps.empty() && !(b.lambda < bps.back().lambda))
            throw ParseError("path csv line " + std::to_string(lineno) +
                             ": lambda is not strictly decreasing");
        bps.push_back(std::move(b));
    }
    if (bps.empty())
        throw ParseError("path csv: no breakpoints");
    return bps;
}

} // namespace l1path
