#include "admatch/splines.hpp"

#include "admatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace admatch {

namespace {

// Type-7 quantile (linear interpolation of order statistics) on sorted values.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::size_t count_distinct(const std::vector<double>& values) {
    std::set<double> s(values.begin(), values.end());
    return s.size();
}

} // namespace

CubicSplineBasis::CubicSplineBasis(const std::vector<double>& t, int df) : df_(df) {
    if (df < 3) throw ValidationError("cubic_spline_basis: df must be >= 3, got " +
                                      std::to_string(df));
    if (t.size() < 2) throw ValidationError("cubic_spline_basis: need at least 2 points");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) {
            throw ValidationError("cubic_spline_basis: t must be strictly increasing");
        }
    }
    if (static_cast<std::size_t>(df) > t.size()) {
        throw ValidationError("cubic_spline_basis: df " + std::to_string(df) + " exceeds the " +
                              std::to_string(t.size()) + " distinct t values");
    }

    // df + 1 B-splines before dropping the intercept carrier: m = df - 3
    // interior knots at quantiles j/(m+1).
    const int m = df - 3;
    const double lo = t.front();
    const double hi = t.back();
    interior_knots_.reserve(m);
    for (int j = 1; j <= m; ++j) {
        interior_knots_.push_back(quantile_sorted(t, static_cast<double>(j) / (m + 1)));
    }
    for (std::size_t j = 1; j < interior_knots_.size(); ++j) {
        if (!(interior_knots_[j] > interior_knots_[j - 1])) {
            throw NumericalError("cubic_spline_basis: coincident interior knots");
        }
    }
    if (!interior_knots_.empty() &&
        (interior_knots_.front() <= lo || interior_knots_.back() >= hi)) {
        throw NumericalError("cubic_spline_basis: interior knot at the boundary");
    }
    knots_.assign(4, lo);
    knots_.insert(knots_.end(), interior_knots_.begin(), interior_knots_.end());
    knots_.insert(knots_.end(), 4, hi);

    basis_.resize(static_cast<Eigen::Index>(t.size()), df_);
    for (std::size_t i = 0; i < t.size(); ++i) basis_.row(static_cast<Eigen::Index>(i)) = evaluate(t[i]);
}

Eigen::VectorXd CubicSplineBasis::evaluate(double x) const {
    const double lo = knots_.front();
    const double hi = knots_.back();
    const double eps = 1e-9 * std::max(1.0, std::abs(hi - lo));
    if (x < lo - eps || x > hi + eps) {
        throw NumericalError("cubic spline evaluated outside [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    }
    x = std::clamp(x, lo, hi);

    // Knot span j with knots_[j] <= x < knots_[j+1], clamped to valid spans.
    const int n_basis = df_ + 1;
    int span = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), x) -
                                knots_.begin()) -
               1;
    span = std::clamp(span, 3, n_basis - 1);

    // Cox-de Boor triangle for the 4 cubic B-splines active on this span.
    double vals[4] = {1.0, 0.0, 0.0, 0.0};
    double left[4], right[4];
    for (int d = 1; d <= 3; ++d) {
        left[d] = x - knots_[span + 1 - d];
        right[d] = knots_[span + d] - x;
        double saved = 0.0;
        for (int r = 0; r < d; ++r) {
            const double temp = vals[r] / (right[r + 1] + left[d - r]);
            vals[r] = saved + right[r + 1] * temp;
            saved = left[d - r] * temp;
        }
        vals[d] = saved;
    }

    Eigen::VectorXd row = Eigen::VectorXd::Zero(df_);
    for (int r = 0; r <= 3; ++r) {
        const int idx = span - 3 + r; // basis function index, 0 .. n_basis-1
        if (idx >= 1) row[idx - 1] = vals[r]; // basis 0 dropped
    }
    return row;
}

CubicSplineBasis cubic_spline_basis(const std::vector<double>& t, int df_per_year,
                                    double n_years) {
    const int df = static_cast<int>(std::lround(df_per_year * n_years));
    return CubicSplineBasis(t, df);
}

TprsBasis tprs_basis(const std::vector<double>& x, int k) {
    if (k < 3) throw ValidationError("tprs_basis: k must be >= 3, got " + std::to_string(k));
    const auto n = static_cast<Eigen::Index>(x.size());
    if (count_distinct(x) < static_cast<std::size_t>(k)) {
        throw ValidationError("tprs_basis: fewer than " + std::to_string(k) +
                              " distinct covariate values");
    }

    Eigen::MatrixXd kernel(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        kernel(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double r = std::abs(x[static_cast<std::size_t>(i)] -
                                      x[static_cast<std::size_t>(j)]);
            kernel(i, j) = kernel(j, i) = r * r * r;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("tprs_basis: eigendecomposition failed");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const auto& eigenvalues = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(eigenvalues[a]) > std::abs(eigenvalues[b]);
    });

    TprsBasis out;
    out.with_constant.resize(n, k);
    for (int r = 0; r < k - 2; ++r) {
        const Eigen::Index idx = order[static_cast<std::size_t>(r)];
        out.with_constant.col(r) = solver.eigenvectors().col(idx) * eigenvalues[idx];
    }
    out.with_constant.col(k - 2) = Eigen::VectorXd::Ones(n);
    out.with_constant.col(k - 1) =
        Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));

    out.columns.resize(n, k - 1);
    out.columns.leftCols(k - 2) = out.with_constant.leftCols(k - 2);
    out.columns.col(k - 2) = out.with_constant.col(k - 1);
    return out;
}

Eigen::MatrixXd tensor_basis(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows()) {
        throw ValidationError("tensor_basis: row mismatch (" + std::to_string(a.rows()) + " vs " +
                              std::to_string(b.rows()) + ")");
    }
    Eigen::MatrixXd out(a.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            out.col(i * b.cols() + j) = a.col(i).cwiseProduct(b.col(j));
        }
    }
    return out;
}

} // namespace admatch
